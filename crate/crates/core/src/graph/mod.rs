//! Labelled multigraphs and their connectivity decompositions: blocks
//! (Bv-tree) and bricks (RMT-tree).

mod blocks;
mod rmt;

pub use blocks::{Block, BvTree};
pub use rmt::{
    recompose, restricted_rmt_tree, rmt_tree, rmt_tree_with_order, Brick, BrickEdge, BrickType, EdgeId, Link,
    RestrictedRmtTree, RmtTree, SplitCandidate,
};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("edge {label} is a loop at vertex {vertex}")]
    Loop { label: usize, vertex: usize },
    #[error("edge {label} uses vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange { label: usize, vertex: usize, n: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("decomposition needs at least 3 edges, graph has {0}")]
    TooFewEdges(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("invalid decomposition tree: {0}")]
    InvalidTree(String),
    #[error("malformed graph description: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Connectivity level; the strongest applicable one is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Disconnected,
    Connected,
    TwoConnected,
    ThreeConnected,
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::Disconnected => "disconnected",
            Connectivity::Connected => "connected",
            Connectivity::TwoConnected => "two_connected",
            Connectivity::ThreeConnected => "three_connected",
        })
    }
}

/// Multigraph on vertices `1..=n`; edge `k` (1-based) is `edges[k-1]`.
/// Parallel edges are allowed, loops are not.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (k, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexOutOfRange { label: k + 1, vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop { label: k + 1, vertex: u });
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of the edges in label order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of edge `label` (1-based).
    pub fn edge(&self, label: usize) -> (usize, usize) {
        self.edges[label - 1]
    }

    /// Same graph with every edge written as `(min, max)`; two graphs are
    /// label-isomorphic exactly when their normal forms are equal.
    pub fn normalized(&self) -> Multigraph {
        Multigraph { n: self.n, edges: self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect() }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adjacency lists of `(neighbour, edge label)` indexed by vertex (index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, k + 1));
            adj[v].push((u, k + 1));
        }
        adj
    }

    /// Whether the vertices not in `removed` induce a connected graph
    /// (vacuously true when at most one remains).
    fn connected_without(&self, removed: &[usize]) -> bool {
        let adj = self.adjacency();
        let alive = |w: usize| !removed.contains(&w);
        let Some(start) = (1..=self.n).find(|&w| alive(w)) else {
            return true;
        };
        let mut seen = vec![false; self.n + 1];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &(b, _) in &adj[a] {
                if alive(b) && !seen[b] {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        count == self.n - removed.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_without(&[])
    }

    /// At least two vertices, connected, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.n >= 2 && self.is_connected() && (1..=self.n).all(|v| self.connected_without(&[v]))
    }

    /// At least four vertices, simple, and no pair of vertices whose removal disconnects.
    pub fn is_three_connected(&self) -> bool {
        if self.n < 4 || !self.is_simple() || !self.is_two_connected() {
            return false;
        }
        (1..=self.n).all(|u| (u + 1..=self.n).all(|v| self.connected_without(&[u, v])))
    }

    pub fn connectivity_class(&self) -> Result<Connectivity> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok(if self.is_three_connected() {
            Connectivity::ThreeConnected
        } else if self.is_two_connected() {
            Connectivity::TwoConnected
        } else if self.is_connected() {
            Connectivity::Connected
        } else {
            Connectivity::Disconnected
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson { n: self.n, edges: self.edges.clone() }).expect("graph serialises")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Malformed(e.to_string()))?;
        Multigraph::new(g.n, g.edges)
    }
}

/// Frequently used small graphs.
pub mod named {
    use super::Multigraph;

    pub fn cycle(n: usize) -> Multigraph {
        Multigraph::new(n, (1..=n).map(|i| (i, i % n + 1)).collect()).expect("valid cycle")
    }

    pub fn path(n: usize) -> Multigraph {
        Multigraph::new(n, (1..n).map(|i| (i, i + 1)).collect()).expect("valid path")
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut e = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                e.push((u, v));
            }
        }
        Multigraph::new(n, e).expect("valid complete graph")
    }

    /// Poles 1 and 2 joined by three paths of length two through 3, 4, 5.
    pub fn theta() -> Multigraph {
        Multigraph::new(5, vec![(1, 3), (3, 2), (1, 4), (4, 2), (1, 5), (5, 2)]).expect("valid theta")
    }

    /// Two triangles sharing vertex 1.
    pub fn bowtie() -> Multigraph {
        Multigraph::new(5, vec![(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)]).expect("valid bowtie")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    /// Literal separator definitions: a k-separator is a bipartition of the
    /// edge set whose parts share exactly k vertices (both parts of size >= k).
    fn has_separator(g: &Multigraph, k: usize) -> bool {
        let m = g.m();
        for mask in 1..(1u32 << m) - 1 {
            let (mut a, mut b) = (0u64, 0u64);
            let (mut ca, mut cb) = (0, 0);
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let bits = (1u64 << u) | (1u64 << v);
                if mask >> e & 1 == 1 {
                    a |= bits;
                    ca += 1;
                } else {
                    b |= bits;
                    cb += 1;
                }
            }
            if ca >= k && cb >= k && (a & b).count_ones() as usize == k {
                return true;
            }
        }
        false
    }

    fn literal_class(g: &Multigraph) -> Connectivity {
        let covers_all = (1..=g.n()).all(|v| g.degree(v) > 0) || g.n() == 1;
        let split0 = !covers_all || has_separator(g, 0);
        if split0 {
            return Connectivity::Disconnected;
        }
        if g.n() < 2 || has_separator(g, 1) {
            return Connectivity::Connected;
        }
        if g.n() < 4 || has_separator(g, 2) {
            return Connectivity::TwoConnected;
        }
        Connectivity::ThreeConnected
    }

    #[test]
    fn examples() {
        assert_eq!(complete(4).connectivity_class().unwrap(), Connectivity::ThreeConnected);
        let link = Multigraph::new(2, vec![(1, 2)]).unwrap();
        assert_eq!(link.connectivity_class().unwrap(), Connectivity::TwoConnected);
        assert_eq!(path(3).connectivity_class().unwrap(), Connectivity::Connected);
        assert_eq!(Multigraph::new(1, vec![]).unwrap().connectivity_class().unwrap(), Connectivity::Connected);
        assert_eq!(Multigraph::new(0, vec![]).unwrap().connectivity_class(), Err(GraphError::EmptyGraph));
        assert_eq!(cycle(3).connectivity_class().unwrap(), Connectivity::TwoConnected);
    }

    #[test]
    fn loops_are_rejected() {
        assert_eq!(Multigraph::new(2, vec![(1, 2), (2, 2)]), Err(GraphError::Loop { label: 2, vertex: 2 }));
        assert!(matches!(Multigraph::new(2, vec![(1, 3)]), Err(GraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn agrees_with_edge_bipartition_definitions() {
        // all multigraphs with up to 5 vertices built from a small edge pool
        let pool: Vec<(usize, usize)> = vec![(1, 2), (1, 2), (2, 3), (1, 3), (3, 4), (1, 4), (2, 4), (4, 5), (1, 5), (3, 5)];
        for n in 2..=5 {
            let usable: Vec<_> = pool.iter().copied().filter(|&(u, v)| u <= n && v <= n).collect();
            for mask in 1u32..(1 << usable.len()) {
                let edges: Vec<_> = (0..usable.len()).filter(|i| mask >> i & 1 == 1).map(|i| usable[i]).collect();
                let g = Multigraph::new(n, edges).unwrap();
                assert_eq!(g.connectivity_class().unwrap(), literal_class(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = theta();
        let text = g.to_json_value().to_string();
        assert_eq!(Multigraph::from_json_str(&text).unwrap(), g);
        assert!(Multigraph::from_json_str(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
