//! Blocks (maximal 2-connected subgraphs) and the block–vertex incidence tree.

use serde::Serialize;

use super::{GraphError, Multigraph, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Sorted vertex labels.
    pub vertices: Vec<usize>,
    /// Sorted edge labels.
    pub edges: Vec<usize>,
}

/// Incidence tree between all vertices and all blocks of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvTree {
    pub block_nodes: Vec<Block>,
    pub vertex_nodes: Vec<usize>,
    /// `(block index, vertex label)` pairs.
    pub incidences: Vec<(usize, usize)>,
}

impl BvTree {
    pub fn node_count(&self) -> usize {
        self.block_nodes.len() + self.vertex_nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.incidences.len()
    }

    /// Vertices lying in more than one block.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let mut count = std::collections::BTreeMap::<usize, usize>::new();
        for &(_, v) in &self.incidences {
            *count.entry(v).or_default() += 1;
        }
        count.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect()
    }

    /// Checks the structural invariants against the source graph.
    pub fn check(&self, g: &Multigraph) -> Result<()> {
        let bad = |s: &str| Err(GraphError::InvalidTree(s.to_string()));
        let mut owner = vec![0usize; g.m() + 1];
        for b in &self.block_nodes {
            for &e in &b.edges {
                owner[e] += 1;
            }
            let sub = induced(g, &b.edges);
            if !sub.is_two_connected() {
                return bad("block is not 2-connected");
            }
        }
        if owner[1..].iter().any(|&c| c != 1) {
            return bad("edges are not partitioned among blocks");
        }
        for (i, a) in self.block_nodes.iter().enumerate() {
            for b in &self.block_nodes[i + 1..] {
                if a.vertices.iter().filter(|v| b.vertices.contains(v)).count() > 1 {
                    return bad("two blocks share more than one vertex");
                }
            }
        }
        if self.edge_count() + 1 != self.node_count() {
            return bad("incidence graph is not a tree");
        }
        // connectedness of the incidence graph
        let nb = self.block_nodes.len();
        let mut parent: Vec<usize> = (0..nb + g.n() + 1).collect();
        fn find(p: &mut [usize], a: usize) -> usize {
            let mut a = a;
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for &(b, v) in &self.incidences {
            let (ra, rb) = (find(&mut parent, b), find(&mut parent, nb + v));
            parent[ra] = rb;
        }
        let root = find(&mut parent, nb + 1);
        if (0..nb).chain((1..=g.n()).map(|v| nb + v)).any(|k| find(&mut parent, k) != root) {
            return bad("incidence graph is disconnected");
        }
        Ok(())
    }
}

/// Subgraph spanned by the given edges, with its vertices relabelled densely.
fn induced(g: &Multigraph, edges: &[usize]) -> Multigraph {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&e| [g.edge(e).0, g.edge(e).1]).collect();
    verts.sort_unstable();
    verts.dedup();
    let pos = |v: usize| verts.binary_search(&v).expect("vertex present") + 1;
    Multigraph::new(verts.len(), edges.iter().map(|&e| (pos(g.edge(e).0), pos(g.edge(e).1))).collect())
        .expect("induced subgraph is valid")
}

impl Multigraph {
    /// The Bv-tree of a connected graph.
    pub fn block_tree(&self) -> Result<BvTree> {
        if self.n() == 0 {
            return Err(GraphError::EmptyGraph);
        }
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        let mut blocks: Vec<Block> = self.biconnected_edge_sets().into_iter().map(|edges| {
            let mut vertices: Vec<usize> = edges.iter().flat_map(|&e| [self.edge(e).0, self.edge(e).1]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let mut edges = edges;
            edges.sort_unstable();
            Block { vertices, edges }
        }).collect();
        blocks.sort_by(|a, b| a.edges.cmp(&b.edges));
        let incidences = blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.vertices.iter().map(move |&v| (i, v)))
            .collect();
        Ok(BvTree { block_nodes: blocks, vertex_nodes: (1..=self.n()).collect(), incidences })
    }

    /// Edge sets of the blocks, via an iterative lowpoint DFS that treats
    /// parallel edges by label so that multi-edges form their own block.
    fn biconnected_edge_sets(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let n = self.n();
        let mut disc = vec![0usize; n + 1];
        let mut low = vec![0usize; n + 1];
        let mut timer = 0;
        let mut out = Vec::new();
        let mut edge_stack: Vec<usize> = Vec::new();
        for root in 1..=n {
            if disc[root] != 0 {
                continue;
            }
            timer += 1;
            disc[root] = timer;
            low[root] = timer;
            // frames: (vertex, parent edge label, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, 0)];
            while let Some(top) = stack.len().checked_sub(1) {
                let (v, pe, idx) = stack[top];
                if idx < adj[v].len() {
                    let (w, e) = adj[v][idx];
                    stack[top].2 += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[w] == 0 {
                        edge_stack.push(e);
                        timer += 1;
                        disc[w] = timer;
                        low[w] = timer;
                        stack.push((w, e, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] >= disc[u] {
                            let mut comp = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                comp.push(e);
                                if e == pe {
                                    break;
                                }
                            }
                            out.push(comp);
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn bowtie_has_two_blocks() {
        let g = bowtie();
        let t = g.block_tree().unwrap();
        assert_eq!(t.block_nodes.len(), 2);
        assert_eq!(t.node_count(), 7);
        assert_eq!(t.edge_count(), 6);
        assert_eq!(t.cut_vertices(), vec![1]);
        t.check(&g).unwrap();
    }

    #[test]
    fn triangle_and_path() {
        let t = cycle(3).block_tree().unwrap();
        assert_eq!(t.node_count(), 4);
        let p = path(3).block_tree().unwrap();
        assert_eq!(p.block_nodes.len(), 2);
        assert_eq!(p.node_count(), 5);
        assert_eq!(p.edge_count(), 4);
        p.check(&path(3)).unwrap();
    }

    #[test]
    fn parallel_edges_stay_in_one_block() {
        let g = Multigraph::new(3, vec![(1, 2), (1, 2), (2, 3)]).unwrap();
        let t = g.block_tree().unwrap();
        assert_eq!(t.block_nodes.len(), 2);
        assert_eq!(t.block_nodes[0].edges, vec![1, 2]);
        t.check(&g).unwrap();
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let t = Multigraph::new(1, vec![]).unwrap().block_tree().unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (1, 0));
        let g = Multigraph::new(3, vec![(1, 2)]).unwrap();
        assert_eq!(g.block_tree(), Err(GraphError::NotConnected));
    }
}
