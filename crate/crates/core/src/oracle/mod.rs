//! Brute-force ground truth: exhaustive enumeration of small labelled
//! graphs, planar maps as rotation systems, and direct checks of the
//! dissymmetry identity on decomposition trees.

mod maps;
mod planarity;

pub use maps::{enum_rooted_maps, MapCensus, MAP_MAX_EDGES};
pub use planarity::{has_kuratowski_subdivision, is_planar, PLANARITY_MAX_N};

use std::collections::BTreeMap;
use std::thread;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::grammar::{ClassTag, Convention, CountTable, FamilyTerminals, GrammarError, GrammarOutput};
use crate::graph::{rmt_tree, BrickType, Connectivity, GraphError, Multigraph};
use crate::series::BiSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what}: size {size} exceeds the limit {max}")]
    SizeLimit { what: &'static str, size: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Largest vertex count for exhaustive graph enumeration.
pub const ENUMERATION_MAX_N: usize = 7;

/// Vertex-labelled counts of a simple graph family at the four connectivity levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTables {
    pub all: CountTable,
    pub connected: CountTable,
    pub two_connected: CountTable,
    pub three_connected: CountTable,
}

impl LevelTables {
    fn empty() -> Self {
        let t = |c| CountTable::new(c, Convention::VertexLabelled);
        LevelTables {
            all: t(ClassTag::All),
            connected: t(ClassTag::Connected),
            two_connected: t(ClassTag::TwoConnected),
            three_connected: t(ClassTag::ThreeConnected),
        }
    }

    pub fn level(&self, class: ClassTag) -> &CountTable {
        match class {
            ClassTag::All => &self.all,
            ClassTag::Connected => &self.connected,
            ClassTag::TwoConnected => &self.two_connected,
            ClassTag::ThreeConnected => &self.three_connected,
        }
    }
}

/// The `k`-th pair of the lexicographic list of pairs `u < v` in `1..=n`.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect()
}

/// Counts all simple graphs on `1..=n`, `n <= n_max`, accepted by `keep`,
/// tabulated by connectivity level. The edge-subset space is split across threads.
pub fn count_tables<F>(n_max: usize, keep: F) -> Result<LevelTables>
where
    F: Fn(&Multigraph) -> Result<bool> + Sync,
{
    if n_max > ENUMERATION_MAX_N {
        return Err(OracleError::SizeLimit { what: "graph enumeration (vertices)", size: n_max, max: ENUMERATION_MAX_N });
    }
    type Counts = BTreeMap<(usize, usize, Connectivity), u64>;
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(16);
    let mut merged: Counts = BTreeMap::new();
    for n in 1..=n_max {
        let all_pairs = pairs(n);
        let total: u64 = 1 << all_pairs.len();
        let chunk = total.div_ceil(workers as u64);
        let parts: Vec<Result<Counts>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let (keep, all_pairs) = (&keep, &all_pairs);
                    scope.spawn(move || -> Result<Counts> {
                        let mut counts = Counts::new();
                        for mask in w * chunk..((w + 1) * chunk).min(total) {
                            let edges = (0..all_pairs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| all_pairs[k]).collect::<Vec<_>>();
                            let m = edges.len();
                            let g = Multigraph::new(n, edges)?;
                            if keep(&g)? {
                                *counts.entry((n, m, g.connectivity_class()?)).or_default() += 1;
                            }
                        }
                        Ok(counts)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        for part in parts {
            for (k, c) in part? {
                *merged.entry(k).or_default() += c;
            }
        }
    }
    let mut tables = LevelTables::empty();
    let add = |t: &mut CountTable, n: usize, m: usize, c: u64| {
        let v = t.get(n as u32, m as u32) + BigInt::from(c);
        t.insert(n as u32, m as u32, v);
    };
    for (&(n, m, class), &c) in &merged {
        add(&mut tables.all, n, m, c);
        if class >= Connectivity::Connected {
            add(&mut tables.connected, n, m, c);
        }
        if class >= Connectivity::TwoConnected {
            add(&mut tables.two_connected, n, m, c);
        }
        if class == Connectivity::ThreeConnected {
            add(&mut tables.three_connected, n, m, c);
        }
    }
    Ok(tables)
}

/// Exhaustive counts of labelled planar graphs with at most `n_max` vertices.
pub fn planar_count_tables(n_max: usize) -> Result<LevelTables> {
    count_tables(n_max, is_planar)
}

/// Whether no block of `g` has a 3-connected brick (for simple graphs:
/// series-parallel, i.e. no `K4` minor).
pub fn has_no_three_connected_brick(g: &Multigraph) -> Result<bool> {
    for comp in split_components(g) {
        if comp.m() < 6 {
            continue;
        }
        let tree = comp.block_tree()?;
        for block in &tree.block_nodes {
            if block.edges.len() < 6 {
                continue;
            }
            let index = |v: usize| block.vertices.iter().position(|&w| w == v).expect("block vertex") + 1;
            let edges = block.edges.iter().map(|&l| {
                let (u, v) = comp.edge(l);
                (index(u), index(v))
            });
            let b = Multigraph::new(block.vertices.len(), edges.collect())?;
            if rmt_tree(&b)?.bricks.iter().any(|br| br.kind == BrickType::T) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Connected components, each relabelled onto `1..=k`.
pub(crate) fn split_components(g: &Multigraph) -> Vec<Multigraph> {
    let mut label = vec![0usize; g.n() + 1];
    let adj = g.adjacency();
    let mut count = 0;
    for s in 1..=g.n() {
        if label[s] != 0 {
            continue;
        }
        count += 1;
        label[s] = count;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for &(b, _) in &adj[a] {
                if label[b] == 0 {
                    label[b] = count;
                    stack.push(b);
                }
            }
        }
    }
    (1..=count)
        .map(|c| {
            let vs: Vec<usize> = (1..=g.n()).filter(|&v| label[v] == c).collect();
            let idx = |v: usize| vs.iter().position(|&w| w == v).expect("component vertex") + 1;
            let e = g.edges().iter().filter(|&&(u, _)| label[u] == c).map(|&(u, v)| (idx(u), idx(v))).collect();
            Multigraph::new(vs.len(), e).expect("component is valid")
        })
        .collect()
}

/// Exhaustive counts of labelled series-parallel graphs with at most `n_max` vertices.
pub fn series_parallel_count_tables(n_max: usize) -> Result<LevelTables> {
    count_tables(n_max, has_no_three_connected_brick)
}

/// Series of a grammar run at the four levels.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSeries {
    pub all: BiSeries,
    pub connected: BiSeries,
    pub two_connected: BiSeries,
    pub three_connected: BiSeries,
}

impl LevelSeries {
    pub fn from_grammar(out: &GrammarOutput, terminals: &FamilyTerminals) -> Self {
        LevelSeries {
            all: out.g.clone(),
            connected: out.g1.clone(),
            two_connected: out.g2.clone(),
            three_connected: terminals.g3.clone(),
        }
    }

    pub fn level(&self, class: ClassTag) -> &BiSeries {
        match class {
            ClassTag::All => &self.all,
            ClassTag::Connected => &self.connected,
            ClassTag::TwoConnected => &self.two_connected,
            ClassTag::ThreeConnected => &self.three_connected,
        }
    }
}

pub const LEVELS: [ClassTag; 4] = [ClassTag::All, ClassTag::Connected, ClassTag::TwoConnected, ClassTag::ThreeConnected];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: u32,
    pub m: u32,
    pub grammar: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub class: ClassTag,
    /// Number of `(n, m)` cells compared (including cells where both counts are zero).
    pub cells: usize,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub n_range: [u32; 2],
    pub m_max: u32,
    pub levels: Vec<LevelReport>,
    pub passed: bool,
}

/// Compares grammar counts with oracle tables for `1 <= n <= n_max` and all
/// edge counts visible in both. Non-integral grammar counts are errors.
pub fn crosscheck(series: &LevelSeries, oracle: &LevelTables, n_max: u32) -> Result<CrosscheckReport> {
    let m_max = LEVELS.iter().map(|&c| series.level(c).trunc().y).min().unwrap_or(0);
    let mut levels = Vec::new();
    for class in LEVELS {
        let s = series.level(class);
        let top = n_max.min(s.trunc().x);
        let grammar = CountTable::extract(s, Convention::VertexLabelled, class)?;
        let table = oracle.level(class);
        let mut cells = 0;
        let mut first = None;
        for n in 1..=top {
            for m in 0..=m_max {
                cells += 1;
                let (a, b) = (grammar.get(n, m), table.get(n, m));
                if a != b && first.is_none() {
                    first = Some(Mismatch { n, m, grammar: a.to_string(), oracle: b.to_string() });
                }
            }
        }
        levels.push(LevelReport { class, cells, passed: first.is_none(), first_mismatch: first });
    }
    let passed = levels.iter().all(|l| l.passed);
    Ok(CrosscheckReport { n_range: [1, n_max], m_max, levels, passed })
}

/// Outcome of checking `#nodes − #edges = 1` on decomposition trees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DissymmetryReport {
    pub graphs: usize,
    pub bv_trees: usize,
    pub rmt_trees: usize,
    pub failures: Vec<String>,
}

impl DissymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every connected graph, checks the Bv-tree; for every 2-connected one
/// with at least three edges, also the RMT-tree.
pub fn dissymmetry_census<'a, I>(gs: I) -> Result<DissymmetryReport>
where
    I: IntoIterator<Item = &'a Multigraph>,
{
    let mut report = DissymmetryReport::default();
    for g in gs {
        report.graphs += 1;
        let bv = g.block_tree()?;
        report.bv_trees += 1;
        if bv.node_count() != bv.edge_count() + 1 {
            report.failures.push(format!("Bv-tree of {g:?}: {} nodes, {} edges", bv.node_count(), bv.edge_count()));
        }
        if g.m() >= 3 && g.is_two_connected() {
            let t = rmt_tree(g)?;
            report.rmt_trees += 1;
            if t.bricks.len() != t.links.len() + 1 {
                report.failures.push(format!("RMT-tree of {g:?}: {} bricks, {} links", t.bricks.len(), t.links.len()));
            }
        }
    }
    Ok(report)
}

/// All connected planar simple graphs on `1..=n` for `n <= n_max`.
pub fn connected_planar_graphs(n_max: usize) -> Result<Vec<Multigraph>> {
    if n_max > 6 {
        return Err(OracleError::SizeLimit { what: "connected planar graph list (vertices)", size: n_max, max: 6 });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let all = pairs(n);
        for mask in 0u64..1 << all.len() {
            let e = (0..all.len()).filter(|&k| mask >> k & 1 == 1).map(|k| all[k]).collect();
            let g = Multigraph::new(n, e)?;
            if g.is_connected() && is_planar(&g)? {
                out.push(g);
            }
        }
    }
    Ok(out)
}
