//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line.
//! All comparisons are exact; the only numeric thresholds are runtimes.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tutte_core::grammar::{self, ClassTag, Convention, CountTable, EdgeMode, FamilyTerminals};
use tutte_core::graph::{recompose, restricted_rmt_tree, rmt_tree, rmt_tree_with_order, Multigraph, RmtTree};
use tutte_core::oracle::{self, LevelSeries, LEVELS};
use tutte_core::planarmaps::{self, Diagnostics};
use tutte_core::series::rat;
use tutte_core::{BiSeries, Rational, Trunc, Var};

/// Runtime ceiling for the exhaustive comparison at n ≤ 6.
const GRAMMAR_VS_ORACLE_LIMIT: Duration = Duration::from_secs(60);
/// "Seconds" for the rooted-map checks.
const ROOTED_MAPS_LIMIT: Duration = Duration::from_secs(10);
/// x up to order 8, s up to order 12.
const DOUBLE_ROUTE_ORDER: Trunc = Trunc::new(8, 12);
const RANDOM_GRAPHS: usize = 500;
const RANDOM_GRAPH_MAX_N: usize = 12;
const SPLIT_ORDERS: usize = 5;
const ALGEBRA_CHECKS: usize = 1000;
const ALGEBRA_TRUNC: Trunc = Trunc::new(8, 8);

fn report(criterion: u32, title: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("acceptance criterion {criterion} [{title}]: {status}");
    if let Some(first) = failures.first() {
        line.push_str(&format!(" ({} failures; first: {first})", failures.len()));
    }
    // written past the test harness capture so the line always appears
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    assert!(failures.is_empty(), "{line}");
}

fn planar_run(trunc: Trunc) -> (FamilyTerminals, grammar::GrammarOutput, Diagnostics) {
    let mut diag = Diagnostics::new();
    let t = planarmaps::planar_terminals(trunc, &mut diag).expect("planar terminals");
    let out = grammar::run(&t, trunc).expect("grammar run");
    (t, out, diag)
}

fn check_names(diag: &Diagnostics, names: &[&str], failures: &mut Vec<String>) {
    for name in names {
        match diag.checks.iter().find(|c| c.name == *name) {
            None => failures.push(format!("check {name:?} was not run")),
            Some(c) if !c.passed => failures.push(format!("{name}: {}", c.first_difference.clone().unwrap_or_default())),
            Some(_) => {}
        }
    }
}

#[test]
fn criterion_1_grammar_matches_oracle() {
    let start = Instant::now();
    let n_max = 6;
    let trunc = Trunc::new(n_max, n_max * (n_max - 1) / 2);
    let (t, out, _) = planar_run(trunc);
    let tables = oracle::planar_count_tables(n_max as usize).unwrap();
    let levels = LevelSeries::from_grammar(&out, &t);
    let cross = oracle::crosscheck(&levels, &tables, n_max).unwrap();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    for level in &cross.levels {
        if let Some(m) = &level.first_mismatch {
            failures.push(format!("{}: {m:?}", level.class));
        }
    }
    let totals: Vec<BigInt> = (1..=5).map(|n| tables.all.total(n)).collect();
    let anchors: Vec<BigInt> = [1, 2, 8, 64, 1023].map(BigInt::from).to_vec();
    if totals != anchors {
        failures.push(format!("oracle totals {totals:?}"));
    }
    if tables.all.total(5) != BigInt::from((1 << 10) - 1) {
        failures.push("n = 5 total is not 2^10 - 1".into());
    }
    if elapsed > GRAMMAR_VS_ORACLE_LIMIT {
        failures.push(format!("took {elapsed:?}"));
    }
    report(1, "grammar vs oracle, n <= 6, four levels", &failures);
}

#[test]
fn criterion_2_double_routes() {
    let diag = planarmaps::double_route_report(DOUBLE_ROUTE_ORDER).unwrap();
    let mut failures: Vec<String> =
        diag.failures().map(|c| format!("{}: {}", c.name, c.first_difference.clone().unwrap_or_default())).collect();
    let routes = [
        "rooted maps: two formulas",
        "pointed 2-connected-root maps: pipeline = closed form",
        "pointed 2-connected maps: substitution = closed form",
        "rooted 3-connected maps: network route = closed form",
        "pointed 3-connected maps: extraction = closed form",
    ];
    check_names(&diag, &routes, &mut failures);
    for c in diag.checks.iter().filter(|c| routes.contains(&c.name.as_str())) {
        let _ = writeln!(std::io::stdout().lock(), "  {} compared on {:?}", c.name, c.compared_on);
        if c.compared_on[0] < 4 || c.compared_on[1] < 4 {
            failures.push(format!("{} compared only on {:?}", c.name, c.compared_on));
        }
    }
    report(2, "double-route identities at x^8, s^12", &failures);
}

#[test]
fn criterion_3_derivative_and_duality() {
    let diag = planarmaps::double_route_report(DOUBLE_ROUTE_ORDER).unwrap();
    let mut failures = Vec::new();
    check_names(
        &diag,
        &[
            "3-connected planar graphs: rooted = (2/x^2) d/dw",
            "3-connected planar graphs: pointed = d/dx",
            "K'(1/x, xw): gamma swap = literal substitution",
            "gamma1(1/x, xw) = gamma2(x, w)",
            "gamma2(1/x, xw) = gamma1(x, w)",
        ],
        &mut failures,
    );
    // the two routes to pointed 2-connected graphs
    let trunc = Trunc::new(7, 12);
    let (t, out, _) = planar_run(trunc);
    let via_bricks = grammar::pointed_two_connected_series(&t, &out.networks, trunc).unwrap();
    let via_derivative = out.g2.derivative(Var::X).unwrap();
    if let Some(d) = via_bricks.first_difference(&via_derivative) {
        failures.push(format!("G2' routes differ at {d}"));
    }
    if via_bricks.trunc().min(via_derivative.trunc()) != Trunc::new(6, 12) || via_bricks.is_zero() {
        failures.push("G2' routes compared on a degenerate box".into());
    }
    failures.extend(grammar::identity_failures(&t, &out).unwrap());
    report(3, "derivative, swap and G2' identities", &failures);
}

#[test]
fn criterion_4_rooted_map_coefficients() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut diag = Diagnostics::new();
    let beta = planarmaps::solve_beta(Trunc::new(3, 8), false).unwrap();
    let rooted = planarmaps::rooted_maps(&beta, &mut diag).unwrap();
    let pointed = planarmaps::mobile_series(Trunc::new(2, 4), &mut diag).unwrap().m_pointed;
    let slice = |s: &BiSeries, j: u32| BiSeries::from_terms(s.terms().filter(|t| t.1 == j).map(|(a, b, c)| (a, b, c.clone())), s.trunc());
    let s2 = |s: &BiSeries| slice(s, 2);
    let expect_rooted = BiSeries::from_terms([(0, 2, rat(1, 1)), (1, 2, rat(1, 1))], rooted.trunc());
    if !s2(&rooted).agrees_with(&expect_rooted) || rooted.trunc().x < 1 {
        failures.push(format!("[s^2] rooted maps = {}", s2(&rooted)));
    }
    let expect_pointed = BiSeries::from_terms([(0, 2, rat(1, 2)), (1, 2, rat(1, 1))], pointed.trunc());
    if !s2(&pointed).agrees_with(&expect_pointed) || pointed.trunc().x < 1 {
        failures.push(format!("[s^2] vertex-pointed maps = {}", s2(&pointed)));
    }
    for (m, total) in [(1u32, 2), (2, 9)] {
        let census = oracle::enum_rooted_maps(m as usize).unwrap();
        if census.total_rooted() != BigInt::from(total) || !census.consistent {
            failures.push(format!("rotation systems with {m} edge(s): {} rooted maps", census.total_rooted()));
        }
        let from_series: Rational = slice(&rooted, 2 * m).terms().map(|t| t.2.clone()).sum();
        if from_series != Rational::from_integer(total.into()) {
            failures.push(format!("series gives {from_series} rooted maps with {m} edge(s)"));
        }
        for (&v, c) in &census.rooted {
            if rooted.coeff(v as u32 - 1, 2 * m) != Rational::from_integer(c.clone()) {
                failures.push(format!("rooted maps, {m} edge(s), {v} vertices"));
            }
        }
        for (&v, c) in &census.pointed {
            if &pointed.coeff(v as u32 - 1, 2 * m) != c {
                failures.push(format!("vertex-pointed maps, {m} edge(s), {v} vertices"));
            }
        }
    }
    if start.elapsed() > ROOTED_MAPS_LIMIT {
        failures.push(format!("took {:?}", start.elapsed()));
    }
    report(4, "rooted-map coefficients vs rotation systems", &failures);
}

/// A random 2-connected multigraph built from a cycle (or a bond) by adding
/// random ears; every 2-connected multigraph arises this way.
fn random_two_connected(rng: &mut ChaCha8Rng) -> Multigraph {
    let target_n = rng.gen_range(2..=RANDOM_GRAPH_MAX_N);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut n;
    if target_n == 2 || rng.gen_bool(0.2) {
        n = 2;
        let k = rng.gen_range(3..=5);
        edges.extend(std::iter::repeat_n((1, 2), k));
    } else {
        n = rng.gen_range(3..=target_n);
        edges.extend((1..n).map(|v| (v, v + 1)));
        edges.push((n, 1));
    }
    let ears = rng.gen_range(0..=target_n);
    for _ in 0..ears {
        let a = rng.gen_range(1..=n);
        let mut b = rng.gen_range(1..=n);
        while b == a {
            b = rng.gen_range(1..=n);
        }
        let inner = rng.gen_range(0..=(target_n - n).min(3));
        let mut prev = a;
        for _ in 0..inner {
            n += 1;
            edges.push((prev, n));
            prev = n;
        }
        edges.push((prev, b));
    }
    // relabel vertices at random so poles and ears are not always low labels
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut relabelled: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])).collect();
    for i in (1..relabelled.len()).rev() {
        relabelled.swap(i, rng.gen_range(0..=i));
    }
    Multigraph::new(n, relabelled).expect("ears never create loops")
}

fn random_graphs() -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e77e);
    (0..RANDOM_GRAPHS).map(|_| random_two_connected(&mut rng)).collect()
}

fn tree_is_connected(t: &RmtTree) -> bool {
    if t.bricks.is_empty() {
        return false;
    }
    let mut seen = vec![false; t.bricks.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(b) = stack.pop() {
        for l in &t.links {
            for (p, q) in [(l.a, l.b), (l.b, l.a)] {
                if p == b && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.iter().all(|&s| s) && t.links.len() + 1 == t.bricks.len()
}

#[test]
fn criterion_5_decomposition_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b1e7);
    let mut failures = Vec::new();
    let graphs = random_graphs();
    let mut sizes = (0, 0);
    for (k, g) in graphs.iter().enumerate() {
        sizes = (sizes.0.max(g.n()), sizes.1.max(g.m()));
        if !g.is_two_connected() || g.n() > RANDOM_GRAPH_MAX_N {
            failures.push(format!("generator produced an invalid graph #{k}: {g:?}"));
            continue;
        }
        let canonical = match rmt_tree(g) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("graph #{k}: {e}"));
                continue;
            }
        };
        if let Err(e) = canonical.validate() {
            failures.push(format!("graph #{k}: {e}"));
        }
        match recompose(&canonical) {
            Ok(h) if h == g.normalized() => {}
            other => failures.push(format!("graph #{k}: recomposition gave {other:?}")),
        }
        for order in 0..SPLIT_ORDERS {
            let t = rmt_tree_with_order(g, |c| rng.gen_range(0..c.len())).unwrap();
            if t != canonical {
                failures.push(format!("graph #{k}: split order {order} changed the tree"));
            }
        }
        for v in 1..=g.n() {
            let r = restricted_rmt_tree(g, v).unwrap();
            let expected = canonical.bricks.iter().filter(|b| b.contains_vertex(v)).count();
            if r.tree.bricks.len() != expected || !tree_is_connected(&r.tree) {
                failures.push(format!("graph #{k}: restriction to vertex {v} is not a subtree of all its bricks"));
            }
        }
    }
    if sizes.0 < RANDOM_GRAPH_MAX_N {
        failures.push(format!("largest random graph has only {} vertices", sizes.0));
    }
    report(5, "random 2-connected multigraph decompositions", &failures);
}

#[test]
fn criterion_6_dissymmetry_census() {
    let mut failures = Vec::new();
    let graphs = random_graphs();
    let random = oracle::dissymmetry_census(&graphs).unwrap();
    let planar = oracle::dissymmetry_census(&oracle::connected_planar_graphs(5).unwrap()).unwrap();
    failures.extend(random.failures.iter().cloned());
    failures.extend(planar.failures.iter().cloned());
    // randomised split orders give the same trees, but check them too
    let mut rng = ChaCha8Rng::seed_from_u64(0xd155);
    for g in &graphs {
        for _ in 0..SPLIT_ORDERS {
            let t = rmt_tree_with_order(g, |c| rng.gen_range(0..c.len())).unwrap();
            if t.node_count() != t.edge_count() + 1 {
                failures.push(format!("{g:?}: {} bricks, {} links", t.node_count(), t.edge_count()));
            }
        }
    }
    if random.rmt_trees != RANDOM_GRAPHS || planar.graphs == 0 {
        failures.push(format!("census sizes {random:?} / {} graphs", planar.graphs));
    }
    report(6, "dissymmetry: #nodes - #edges = 1", &failures);
}

#[test]
fn criterion_7_integrality() {
    let mut failures = Vec::new();
    let trunc = Trunc::new(7, 15);
    let (t, out, _) = planar_run(trunc);
    let simple = LevelSeries::from_grammar(&out, &t);
    let mut multi_t = t.clone();
    multi_t.mode = EdgeMode::Multi;
    let multi_out = grammar::run(&multi_t, trunc).unwrap();
    let multi = LevelSeries::from_grammar(&multi_out, &multi_t);
    let mut cells = 0;
    for (levels, conv) in [(&simple, Convention::VertexLabelled), (&multi, Convention::EdgeLabelled)] {
        for class in LEVELS {
            match CountTable::extract(levels.level(class), conv, class) {
                Ok(table) => cells += table.rows().count(),
                Err(e) => failures.push(format!("{class} {conv:?}: {e}")),
            }
        }
    }
    for (name, s) in [("G2'", &out.g2_pointed), ("C'", &out.c_pointed), ("D", &out.networks.d)] {
        if let Err(e) = CountTable::extract(s, Convention::VertexLabelled, ClassTag::All) {
            failures.push(format!("{name}: {e}"));
        }
    }
    for m in 1..=oracle::MAP_MAX_EDGES {
        if !oracle::enum_rooted_maps(m).unwrap().consistent {
            failures.push(format!("rooted map counts with {m} edge(s) are not integers"));
        }
    }
    if cells == 0 {
        failures.push("no counts extracted".into());
    }
    report(7, "integrality of every extracted count", &failures);
}

/// Sparse random series with small rational coefficients.
fn random_series(rng: &mut ChaCha8Rng, trunc: Trunc, constant: bool) -> BiSeries {
    let mut terms = Vec::new();
    for i in 0..=trunc.x {
        for j in 0..=trunc.y {
            if (i, j) == (0, 0) && !constant {
                continue;
            }
            if rng.gen_bool(0.35) {
                terms.push((i, j, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
            }
        }
    }
    BiSeries::from_terms(terms, trunc)
}

/// A random substitute `x·a(x, y)` or `y·a(x, y)`, which keeps the full box exact.
fn random_substitute(rng: &mut ChaCha8Rng, v: Var) -> BiSeries {
    let a = random_series(rng, ALGEBRA_TRUNC, true);
    let mono = match v {
        Var::X => BiSeries::var(Var::X, ALGEBRA_TRUNC),
        Var::Y => BiSeries::var(Var::Y, ALGEBRA_TRUNC),
    };
    &mono * &a
}

fn algebra_check(k: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let t = ALGEBRA_TRUNC;
    let eq = |what: &str, a: &BiSeries, b: &BiSeries| match a.first_difference(b) {
        Some(d) => Err(format!("check {k} ({what}): {d}")),
        None if a.trunc().min(b.trunc()) != t => Err(format!("check {k} ({what}): box shrank")),
        None => Ok(()),
    };
    let (a, b, c) = (random_series(rng, t, true), random_series(rng, t, true), random_series(rng, t, true));
    match k % 4 {
        0 => {
            eq("+ associative", &(&(&a + &b) + &c), &(&a + &(&b + &c)))?;
            eq("* associative", &(&(&a * &b) * &c), &(&a * &(&b * &c)))?;
            eq("* commutative", &(&a * &b), &(&b * &a))?;
            eq("distributive", &(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)))?;
            eq("additive inverse", &(&a + &(-&a)), &BiSeries::zero(t))?;
            eq("unit", &(&a * &BiSeries::one(t)), &a)
        }
        1 => {
            let f = random_series(rng, t, false);
            let one = BiSeries::one(t);
            eq("log exp", &f.exp().unwrap().log().unwrap(), &f)?;
            eq("exp log", &(&one + &f).log().unwrap().exp().unwrap(), &(&one + &f))?;
            let g = random_series(rng, t, false);
            eq("exp additive", &(&f + &g).exp().unwrap(), &(&f.exp().unwrap() * &g.exp().unwrap()))
        }
        2 => {
            for v in [Var::X, Var::Y] {
                let lhs = (&a * &b).derivative(v).unwrap();
                let rhs = &(&a.derivative(v).unwrap() * &b) + &(&a * &b.derivative(v).unwrap());
                if let Some(d) = lhs.first_difference(&rhs) {
                    return Err(format!("check {k} (product rule d/d{v:?}): {d}"));
                }
                if lhs.trunc().min(rhs.trunc()) != lhs.trunc() {
                    return Err(format!("check {k} (product rule): box"));
                }
            }
            Ok(())
        }
        _ => {
            let (g, h) = (random_substitute(rng, Var::X), random_substitute(rng, Var::Y));
            let (p, q) = (random_substitute(rng, Var::X), random_substitute(rng, Var::Y));
            let inner_first = a.substitute(&g.substitute(&p, &q).unwrap(), &h.substitute(&p, &q).unwrap()).unwrap();
            let outer_first = a.substitute(&g, &h).unwrap().substitute(&p, &q).unwrap();
            eq("substitution associative", &inner_first, &outer_first)
        }
    }
}

#[test]
fn criterion_8_series_kernel_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa16eb7a);
    let failures: Vec<String> = (0..ALGEBRA_CHECKS).filter_map(|k| algebra_check(k, &mut rng).err()).collect();
    report(8, "randomised series algebra at (8, 8)", &failures);
}
