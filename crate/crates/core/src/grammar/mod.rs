//! Counting series of a graph family from the series of its 3-connected
//! members, following the decomposition connected → 2-connected → networks
//! → 3-connected.
//!
//! Variables: `x` (or `z` at the connected level) marks vertices, `y` marks
//! edges, and `w` is the edge variable of the terminal series, into which
//! networks are substituted (`w = D(x, y)`). All series are exponential in
//! both variables.

mod counts;

pub use counts::{ClassTag, Convention, CountTable};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{int, rat, BiSeries, Expr, Rational, SeriesError, SeriesSystem, Trunc, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrammarError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("non-integer count {value} at n={n}, m={m}")]
    NonIntegerCount { n: u32, m: u32, value: String },
    #[error("negative count {value} at n={n}, m={m}")]
    NegativeCount { n: u32, m: u32, value: String },
    #[error("inconsistent terminal series: {0}")]
    InconsistentTerminals(String),
}

pub type Result<T> = std::result::Result<T, GrammarError>;

/// Whether the family admits parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeMode {
    Simple,
    Multi,
}

/// The series of the 3-connected members: `G3`, its vertex-pointed form
/// `∂x G3`, and its edge-rooted form `(2/x²) ∂w G3`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyTerminals {
    pub g3: BiSeries,
    pub g3_pointed: BiSeries,
    pub g3_rooted: BiSeries,
    pub mode: EdgeMode,
}

impl FamilyTerminals {
    /// Builds terminals and checks the derivative relations and the
    /// four-vertex threshold on their common box.
    pub fn new(g3: BiSeries, g3_pointed: BiSeries, g3_rooted: BiSeries, mode: EdgeMode) -> Result<Self> {
        let t = FamilyTerminals { g3, g3_pointed, g3_rooted, mode };
        t.check()?;
        Ok(t)
    }

    /// Derives the pointed and rooted forms from `g3` (the result is exact on smaller boxes).
    pub fn from_unrooted(g3: BiSeries, mode: EdgeMode) -> Result<Self> {
        let pointed = g3.derivative(Var::X)?;
        let rooted = g3.rooted_derivative()?;
        Self::new(g3, pointed, rooted, mode)
    }

    /// No 3-connected members: series-parallel graphs.
    pub fn series_parallel(mode: EdgeMode, trunc: Trunc) -> Self {
        FamilyTerminals {
            g3: BiSeries::zero(trunc),
            g3_pointed: BiSeries::zero(trunc),
            g3_rooted: BiSeries::zero(trunc),
            mode,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |s: String| Err(GrammarError::InconsistentTerminals(s));
        if let Some((i, _, _)) = self.g3.terms().find(|&(i, _, _)| i < 4) {
            return bad(format!("3-connected series has a term with {i} < 4 vertices"));
        }
        if self.g3.trunc().x >= 1 {
            let d = self.g3.derivative(Var::X)?;
            if let Some(diff) = d.first_difference(&self.g3_pointed) {
                return bad(format!("pointed terminal differs from the x-derivative at {diff}"));
            }
        }
        if self.g3.trunc().x >= 2 && self.g3.trunc().y >= 1 {
            let r = self.g3.rooted_derivative()?;
            if let Some(diff) = r.first_difference(&self.g3_rooted) {
                return bad(format!("rooted terminal differs from (2/x^2) d/dw at {diff}"));
            }
        }
        Ok(())
    }
}

/// Network series: general `D`, series `S`, parallel `P`, and `H` (a
/// 3-connected core with edges replaced by networks).
#[derive(Clone, Debug, PartialEq)]
pub struct Networks {
    pub d: BiSeries,
    pub s: BiSeries,
    pub p: BiSeries,
    pub h: BiSeries,
}

/// Every series produced by a full run.
#[derive(Clone, Debug, PartialEq)]
pub struct GrammarOutput {
    pub networks: Networks,
    pub g2: BiSeries,
    pub g2_pointed: BiSeries,
    pub c_pointed: BiSeries,
    pub g1: BiSeries,
    pub g: BiSeries,
}

fn require(s: BiSeries, target: Trunc, what: &str) -> Result<BiSeries> {
    if !s.trunc().covers(target) {
        return Err(SeriesError::TruncationExhausted(format!(
            "{what} is only exact on {} but {target} is required",
            s.trunc()
        ))
        .into());
    }
    Ok(s.restrict(target))
}

/// Solves the network equations jointly with `D = y + S + P + H`.
pub fn network_system(t: &FamilyTerminals, trunc: Trunc) -> Result<Networks> {
    let mut sys = SeriesSystem::new();
    let d = sys.unknown("D");
    let s = sys.unknown("S");
    let p = sys.unknown("P");
    let h = sys.unknown("H");
    sys.define(&d, Expr::y() + s.clone() + p.clone() + h.clone())?;
    sys.define(&s, (&d - &s) * Expr::x() * d.clone())?;
    let p_rhs = match t.mode {
        EdgeMode::Multi => (&d - &p).exp_at_least(2),
        EdgeMode::Simple => {
            let core = &d - &p - Expr::y();
            Expr::y() * core.clone().exp_at_least(1) + core.exp_at_least(2)
        }
    };
    sys.define(&p, p_rhs)?;
    sys.define(&h, Expr::known(t.g3_rooted.clone()).substitute(Expr::x(), d.clone()))?;
    let sol = sys.solve(trunc)?;
    Ok(Networks {
        d: sol.get("D")?.clone(),
        s: sol.get("S")?.clone(),
        p: sol.get("P")?.clone(),
        h: sol.get("H")?.clone(),
    })
}

fn restricted(nets: &Networks, trunc: Trunc) -> Result<Networks> {
    Ok(Networks {
        d: require(nets.d.clone(), trunc, "D")?,
        s: require(nets.s.clone(), trunc, "S")?,
        p: require(nets.p.clone(), trunc, "P")?,
        h: require(nets.h.clone(), trunc, "H")?,
    })
}

/// The pieces of the 2-connected series, kept separate for diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct BrickTerms {
    pub epsilon: BiSeries,
    pub r: BiSeries,
    pub m: BiSeries,
    pub t: BiSeries,
    pub rm: BiSeries,
    pub rt: BiSeries,
    pub mt: BiSeries,
    pub tt: BiSeries,
}

impl BrickTerms {
    pub fn total(&self) -> BiSeries {
        &(&(&(&(&(&(&self.epsilon + &self.r) + &self.m) + &self.t) - &self.rm) - &self.rt) - &self.mt) - &self.tt
    }
}

/// Terms of `G2` on the box `trunc`.
pub fn two_connected_terms(t: &FamilyTerminals, nets: &Networks, trunc: Trunc) -> Result<BrickTerms> {
    let n = restricted(nets, trunc)?;
    let x = BiSeries::var(Var::X, trunc);
    let y = BiSeries::var(Var::Y, trunc);
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let x2 = BiSeries::monomial(2, 0, Rational::one(), trunc);
    let epsilon = match t.mode {
        EdgeMode::Multi => BiSeries::from_terms([(2, 1, half.clone()), (2, 2, quarter.clone())], trunc),
        EdgeMode::Simple => BiSeries::monomial(2, 1, half.clone(), trunc),
    };
    let r = (&x * &(&n.d - &n.s)).loga_at_least(3)?.scale(&half);
    let m = match t.mode {
        EdgeMode::Multi => &x2 * &(&n.d - &n.p).exp_at_least(3)?.scale(&half),
        EdgeMode::Simple => {
            let core = &(&n.d - &n.p) - &y;
            &x2 * &(&(&y * &core.exp_at_least(2)?) + &core.exp_at_least(3)?).scale(&half)
        }
    };
    let tb = require(t.g3.substitute(&x, &n.d)?, trunc, "G3(x, D)")?;
    let rm = (&x2 * &(&n.s * &n.p)).scale(&half);
    let rt = (&x2 * &(&n.s * &n.h)).scale(&half);
    let mt = (&x2 * &(&n.p * &n.h)).scale(&half);
    let tt = (&x2 * &(&n.h * &n.h)).scale(&quarter);
    Ok(BrickTerms { epsilon, r, m, t: tb, rm, rt, mt, tt })
}

/// `G2`, the series of 2-connected members.
pub fn two_connected_series(t: &FamilyTerminals, nets: &Networks, trunc: Trunc) -> Result<BiSeries> {
    Ok(two_connected_terms(t, nets, trunc)?.total())
}

/// Terms of the vertex-pointed 2-connected series on `trunc`.
pub fn pointed_two_connected_terms(t: &FamilyTerminals, nets: &Networks, trunc: Trunc) -> Result<BrickTerms> {
    let n = restricted(nets, trunc)?;
    let x = BiSeries::var(Var::X, trunc);
    let y = BiSeries::var(Var::Y, trunc);
    let half = rat(1, 2);
    let x2 = BiSeries::monomial(2, 0, Rational::one(), trunc);
    let epsilon = match t.mode {
        EdgeMode::Multi => BiSeries::from_terms([(1, 1, int(1)), (1, 2, half.clone())], trunc),
        EdgeMode::Simple => BiSeries::monomial(1, 1, int(1), trunc),
    };
    let ds = &n.d - &n.s;
    let r = (&x2 * &(&(&ds * &ds) * &n.d)).scale(&half);
    let m = match t.mode {
        EdgeMode::Multi => &x * &(&n.d - &n.p).exp_at_least(3)?,
        EdgeMode::Simple => {
            let core = &(&n.d - &n.p) - &y;
            &(&(&x * &y) * &core.exp_at_least(2)?) + &(&x * &core.exp_at_least(3)?)
        }
    };
    let tb = require(t.g3_pointed.substitute(&x, &n.d)?, trunc, "G3'(x, D)")?;
    let rm = &x * &(&n.s * &n.p);
    let rt = &x * &(&n.s * &n.h);
    let mt = &x * &(&n.p * &n.h);
    let tt = (&x * &(&n.h * &n.h)).scale(&half);
    Ok(BrickTerms { epsilon, r, m, t: tb, rm, rt, mt, tt })
}

/// `G2'`, computed directly from the pointed decomposition (not by differentiation).
pub fn pointed_two_connected_series(t: &FamilyTerminals, nets: &Networks, trunc: Trunc) -> Result<BiSeries> {
    Ok(pointed_two_connected_terms(t, nets, trunc)?.total())
}

/// Connected level.
#[derive(Clone, Debug, PartialEq)]
pub struct Connected {
    /// `C'(z, y) = exp(G2'(z C', y))`, on the box `(Nz - 1, Ny)`.
    pub c_pointed: BiSeries,
    pub c_v: BiSeries,
    pub c_b: BiSeries,
    pub c_vb: BiSeries,
    /// `G1 = C_v + C_B - C_vB`.
    pub g1: BiSeries,
}

/// Solves the connected level on the box `trunc` in `(z, y)`. `g2` must be
/// exact on `trunc`, `g2_pointed` on `(Nz - 1, Ny)`.
pub fn connected_series(g2: &BiSeries, g2_pointed: &BiSeries, trunc: Trunc) -> Result<Connected> {
    if trunc.x == 0 {
        // only the empty graph is visible
        let z = BiSeries::zero(trunc);
        return Ok(Connected {
            c_pointed: BiSeries::one(Trunc::new(0, trunc.y)),
            c_v: z.clone(),
            c_b: z.clone(),
            c_vb: z.clone(),
            g1: z,
        });
    }
    let inner = Trunc::new(trunc.x - 1, trunc.y);
    let g2 = require(g2.clone(), trunc, "G2")?;
    let g2p = require(g2_pointed.clone(), inner, "G2'")?;
    let mut sys = SeriesSystem::new();
    let c = sys.unknown("C'");
    let g2p_expr = Expr::known(g2p.clone());
    sys.define(&c, g2p_expr.substitute(c.clone().shift(1, 0), Expr::y()).exp())?;
    sys.set_initial(&c, BiSeries::one(inner))?;
    let c_pointed = sys.solve(inner)?.get("C'")?.clone();
    let zc = c_pointed.shift(1, 0);
    let y = BiSeries::var(Var::Y, trunc);
    let c_v = zc.clone();
    let c_b = require(g2.substitute(&zc, &y)?, trunc, "G2(zC', y)")?;
    let c_vb = require((&c_pointed * &g2p.substitute(&zc, &BiSeries::var(Var::Y, inner))?).shift(1, 0), trunc, "zC' G2'(zC', y)")?;
    let g1 = &(&c_v + &c_b) - &c_vb;
    Ok(Connected { c_pointed, c_v, c_b, c_vb, g1 })
}

/// `G = exp(G1)`.
pub fn all_graphs_series(g1: &BiSeries) -> Result<BiSeries> {
    Ok(g1.exp()?)
}

/// Runs the whole grammar on the box `trunc` (vertices, edges).
pub fn run(t: &FamilyTerminals, trunc: Trunc) -> Result<GrammarOutput> {
    t.check()?;
    let nets = network_system(t, trunc)?;
    let g2 = two_connected_series(t, &nets, trunc)?;
    let g2_pointed = pointed_two_connected_series(t, &nets, Trunc::new(trunc.x.saturating_sub(1), trunc.y))?;
    let conn = connected_series(&g2, &g2_pointed, trunc)?;
    let g = all_graphs_series(&conn.g1)?;
    Ok(GrammarOutput { networks: nets, g2, g2_pointed, c_pointed: conn.c_pointed, g1: conn.g1, g })
}

/// Forests: the only 2-connected graph is the link, `G2 = x²y/2`.
pub fn forest_series(trunc: Trunc) -> Result<(BiSeries, BiSeries)> {
    let g2 = BiSeries::monomial(2, 1, rat(1, 2), trunc);
    let g2p = BiSeries::monomial(1, 1, Rational::one(), Trunc::new(trunc.x.saturating_sub(1), trunc.y));
    let conn = connected_series(&g2, &g2p, trunc)?;
    let g = all_graphs_series(&conn.g1)?;
    Ok((conn.g1, g))
}

/// Identity checks that hold for every family, reported as human-readable failures.
pub fn identity_failures(t: &FamilyTerminals, out: &GrammarOutput) -> Result<Vec<String>> {
    let mut fails = Vec::new();
    let mut check = |name: &str, a: &BiSeries, b: &BiSeries| {
        if let Some(d) = a.first_difference(b) {
            fails.push(format!("{name}: {d}"));
        }
    };
    let n = &out.networks;
    check("D = y + S + P + H", &n.d, &(&(&(&BiSeries::var(Var::Y, n.d.trunc()) + &n.s) + &n.p) + &n.h));
    check("G2' = dG2/dx", &out.g2_pointed, &out.g2.derivative(Var::X)?);
    check("dG1/dz = C'", &out.g1.derivative(Var::X)?, &out.c_pointed);
    check("G = exp(G1)", &out.g, &out.g1.exp()?);
    let rooted = out.g2.rooted_derivative()?;
    let one_plus_d = &BiSeries::one(n.d.trunc()) + &n.d;
    match t.mode {
        EdgeMode::Multi => check("(2/x^2) dG2/dy = 1 + D", &rooted, &one_plus_d),
        EdgeMode::Simple => {
            // the root edge of a simple network can be doubled by a parallel edge only when absent
            let lhs = &(&BiSeries::one(rooted.trunc()) + &BiSeries::var(Var::Y, rooted.trunc())) * &rooted;
            check("(1 + y)(2/x^2) dG2/dy = 1 + D", &lhs, &one_plus_d)
        }
    }
    if !out.c_pointed.constant_term().is_one() || !out.g.constant_term().is_one() || !out.g1.constant_term().is_zero() {
        fails.push("constant terms".into());
    }
    Ok(fails)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn series_parallel_networks_low_order() {
        let trunc = Trunc::new(4, 4);
        let t = FamilyTerminals::series_parallel(EdgeMode::Simple, trunc);
        let n = network_system(&t, trunc).unwrap();
        assert_eq!(n.d.coeff(0, 1), int(1));
        assert_eq!(n.s.coeff(1, 2), int(1));
        assert!(n.h.is_zero());
    }

    #[test]
    fn zero_truncation_networks() {
        let trunc = Trunc::new(0, 0);
        let t = FamilyTerminals::series_parallel(EdgeMode::Multi, trunc);
        assert!(network_system(&t, trunc).unwrap().d.is_zero());
    }

    #[test]
    fn multi_edge_epsilon_and_link() {
        let trunc = Trunc::new(3, 3);
        let t = FamilyTerminals::series_parallel(EdgeMode::Multi, trunc);
        let nets = network_system(&t, trunc).unwrap();
        let g2 = two_connected_series(&t, &nets, trunc).unwrap();
        assert_eq!(g2.coeff(2, 1), rat(1, 2));
        assert_eq!(g2.coeff(2, 2), rat(1, 4));
        // three parallel edges between two labelled vertices: one structure, 3! edge labellings
        assert_eq!(g2.coeff(2, 3), rat(1, 12));
    }

    #[test]
    fn zero_terminals_pointed_is_epsilon() {
        let trunc = Trunc::new(1, 3);
        let t = FamilyTerminals::series_parallel(EdgeMode::Simple, trunc);
        let nets = network_system(&t, trunc).unwrap();
        let g2p = pointed_two_connected_series(&t, &nets, trunc).unwrap();
        assert_eq!(g2p, BiSeries::monomial(1, 1, int(1), trunc));
    }

    #[test]
    fn forests_and_trees() {
        let (g1, g) = forest_series(Trunc::new(6, 6)).unwrap();
        let mut fact = BigInt::from(1);
        let forests = [1, 1, 2, 7, 38, 291, 2932];
        for n in 1..=6u32 {
            fact *= n;
            // trees: n^(n-2) labelled trees with n-1 edges
            let trees = Rational::from_integer(BigInt::from(n).pow(n.saturating_sub(2))) / Rational::from_integer(fact.clone());
            assert_eq!(g1.coeff(n, n - 1), trees);
            let total: Rational = (0..=6).map(|m| g.coeff(n, m)).sum();
            assert_eq!(total * Rational::from_integer(fact.clone()), int(forests[n as usize]));
        }
    }

    #[test]
    fn identities_hold_for_series_parallel() {
        for mode in [EdgeMode::Simple, EdgeMode::Multi] {
            let trunc = Trunc::new(5, 6);
            let t = FamilyTerminals::series_parallel(mode, trunc);
            let out = run(&t, trunc).unwrap();
            assert_eq!(identity_failures(&t, &out).unwrap(), Vec::<String>::new(), "{mode:?}");
        }
    }

    #[test]
    fn g1_zero_gives_one() {
        let t = Trunc::new(3, 3);
        assert_eq!(all_graphs_series(&BiSeries::zero(t)).unwrap(), BiSeries::one(t));
    }

    #[test]
    fn inconsistent_terminals_are_rejected() {
        let trunc = Trunc::new(6, 6);
        let bad = BiSeries::monomial(3, 3, int(1), trunc);
        assert!(FamilyTerminals::from_unrooted(bad, EdgeMode::Simple).is_err());
        let k4 = BiSeries::monomial(4, 6, rat(1, 24), trunc);
        let ok = FamilyTerminals::from_unrooted(k4.clone(), EdgeMode::Simple).unwrap();
        let wrong = FamilyTerminals { g3_pointed: BiSeries::zero(trunc), ..ok };
        assert!(wrong.check().is_err());
    }
}
