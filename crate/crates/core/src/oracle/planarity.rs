//! Planarity by path addition (Demoucron–Malgrange–Pertuiset), and a slow
//! Kuratowski subdivision search used to cross-check it on tiny graphs.

use std::collections::{BTreeSet, VecDeque};

use super::{split_components, OracleError, Result};
use crate::graph::Multigraph;

/// Largest vertex count accepted by [`is_planar`].
pub const PLANARITY_MAX_N: usize = 64;

/// Simple underlying graph as sorted, deduplicated `(min, max)` pairs.
fn simple_edges(g: &Multigraph) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    set.into_iter().collect()
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Whether `g` (parallel edges ignored) embeds in the sphere.
pub fn is_planar(g: &Multigraph) -> Result<bool> {
    if g.n() > PLANARITY_MAX_N {
        return Err(OracleError::SizeLimit { what: "planarity test", size: g.n(), max: PLANARITY_MAX_N });
    }
    let edges = simple_edges(g);
    if g.n() >= 3 && edges.len() > 3 * g.n() - 6 {
        return Ok(false);
    }
    if g.n() <= 4 {
        return Ok(true);
    }
    // a graph is planar iff each of its blocks is
    let simple = Multigraph::new(g.n(), edges).expect("edges come from a valid graph");
    for comp in split_components(&simple) {
        if comp.m() < 9 || comp.n() < 5 {
            continue;
        }
        let tree = comp.block_tree()?;
        for block in &tree.block_nodes {
            if block.vertices.len() < 5 || block.edges.len() < 9 {
                continue;
            }
            let (n, e) = relabel(&comp, &block.vertices, &block.edges);
            if e.len() > 3 * n - 6 || !biconnected_planar(n, &e) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn relabel(g: &Multigraph, vertices: &[usize], labels: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let index = |v: usize| vertices.iter().position(|&w| w == v).expect("endpoint in vertex set") + 1;
    let edges = labels.iter().map(|&l| {
        let (u, v) = g.edge(l);
        (index(u), index(v))
    });
    (vertices.len(), edges.collect())
}

/// A piece of the graph not yet embedded: a single chord, or a component of
/// the unembedded vertices together with its edges to the embedded part.
struct Fragment {
    attachments: BTreeSet<usize>,
    /// `None` for a chord; otherwise the component's vertices.
    inner: Option<BTreeSet<usize>>,
    chord: (usize, usize),
}

/// Path addition on a 2-connected simple graph on `1..=n`.
fn biconnected_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = adjacency(n, edges);
    let mut embedded_v = vec![false; n + 1];
    let mut embedded_e: BTreeSet<(usize, usize)> = BTreeSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    let cycle = find_cycle(n, &adj);
    for (k, &v) in cycle.iter().enumerate() {
        embedded_v[v] = true;
        embedded_e.insert(key(v, cycle[(k + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    loop {
        let fragments = fragments(n, &adj, edges, &embedded_v, &embedded_e);
        if fragments.is_empty() {
            return true;
        }
        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|f| {
                (0..faces.len()).filter(|&i| f.attachments.iter().all(|a| faces[i].contains(a))).collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return false;
        }
        let pick = admissible.iter().position(|a| a.len() == 1).unwrap_or(0);
        let face_idx = admissible[pick][0];
        let path = fragment_path(&adj, &fragments[pick], &embedded_v);
        for w in path.windows(2) {
            embedded_e.insert(key(w[0], w[1]));
        }
        for &v in &path {
            embedded_v[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
}

fn find_cycle(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    // DFS from vertex 1 until a back edge closes a cycle
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![usize::MAX; n + 1];
    let mut stack = vec![(1usize, 0usize)];
    depth[1] = 0;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if *i == adj[v].len() {
            stack.pop();
            continue;
        }
        let w = adj[v][*i];
        *i += 1;
        if depth[w] == usize::MAX {
            depth[w] = depth[v] + 1;
            parent[w] = v;
            stack.push((w, 0));
        } else if w != parent[v] && depth[w] < depth[v] {
            let mut cycle = vec![v];
            let mut u = v;
            while u != w {
                u = parent[u];
                cycle.push(u);
            }
            return cycle;
        }
    }
    unreachable!("a 2-connected graph has a cycle")
}

fn fragments(
    n: usize,
    adj: &[Vec<usize>],
    edges: &[(usize, usize)],
    embedded_v: &[bool],
    embedded_e: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(u, v) in edges {
        if embedded_v[u] && embedded_v[v] && !embedded_e.contains(&(u, v)) {
            out.push(Fragment { attachments: [u, v].into(), inner: None, chord: (u, v) });
        }
    }
    let mut seen = vec![false; n + 1];
    for s in 1..=n {
        if embedded_v[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut inner = BTreeSet::from([s]);
        let mut attachments = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if embedded_v[b] {
                    attachments.insert(b);
                } else if !seen[b] {
                    seen[b] = true;
                    inner.insert(b);
                    queue.push_back(b);
                }
            }
        }
        out.push(Fragment { attachments, inner: Some(inner), chord: (0, 0) });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], f: &Fragment, embedded_v: &[bool]) -> Vec<usize> {
    let Some(inner) = &f.inner else {
        return vec![f.chord.0, f.chord.1];
    };
    let mut att = f.attachments.iter().copied();
    let a = att.next().expect("fragment has attachments");
    // BFS from a through inner vertices until another attachment is reached
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &b in &adj[a] {
        if inner.contains(&b) && prev[b] == usize::MAX {
            prev[b] = a;
            queue.push_back(b);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &b in &adj[v] {
            if embedded_v[b] && b != a {
                let mut path = vec![b, v];
                let mut u = v;
                while prev[u] != a {
                    u = prev[u];
                    path.push(u);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if inner.contains(&b) && prev[b] == usize::MAX {
                prev[b] = v;
                queue.push_back(b);
            }
        }
    }
    unreachable!("in a 2-connected graph every fragment has two distinct attachments")
}

/// Splits the cyclic face boundary by a path whose ends lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().expect("nonempty path");
    let i = face.iter().position(|&v| v == a).expect("path starts on face");
    let j = face.iter().position(|&v| v == b).expect("path ends on face");
    let k = face.len();
    let walk = |from: usize, to: usize| {
        let mut out = vec![face[from]];
        let mut p = from;
        while p != to {
            p = (p + 1) % k;
            out.push(face[p]);
        }
        out
    };
    let interior = &path[1..path.len() - 1];
    let mut f1 = walk(i, j);
    f1.extend(interior.iter().rev());
    let mut f2 = walk(j, i);
    f2.extend(interior.iter());
    (f1, f2)
}

/// Whether `g` contains a subdivision of `K5` or `K3,3`, by exhaustive search
/// over branch vertices and internally disjoint paths. Exponential; meant for
/// graphs with at most about 7 vertices.
pub fn has_kuratowski_subdivision(g: &Multigraph) -> bool {
    let n = g.n();
    let edges = simple_edges(g);
    let adj = adjacency(n, &edges);
    let deg = |v: usize| adj[v].len();
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect());
            }
        }
        out
    };
    for s in subsets(5) {
        if s.iter().all(|&v| deg(v) >= 4) {
            let mut pairs = Vec::new();
            for a in 0..5 {
                for b in a + 1..5 {
                    pairs.push((s[a], s[b]));
                }
            }
            if route(&adj, &pairs, branch_mask(&s)) {
                return true;
            }
        }
    }
    for s in subsets(6) {
        if !s.iter().all(|&v| deg(v) >= 3) {
            continue;
        }
        // split into sides {s0, a, b} and the rest
        for i in 1..6 {
            for j in i + 1..6 {
                let left = [s[0], s[i], s[j]];
                let right: Vec<usize> = s.iter().copied().filter(|v| !left.contains(v)).collect();
                let pairs: Vec<_> = left.iter().flat_map(|&a| right.iter().map(move |&b| (a, b))).collect();
                if route(&adj, &pairs, branch_mask(&s)) {
                    return true;
                }
            }
        }
    }
    false
}

fn branch_mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << v)
}

/// Routes every pair by a path whose interior avoids `used`, with all paths
/// internally disjoint.
fn route(adj: &[Vec<usize>], pairs: &[(usize, usize)], used: u64) -> bool {
    let Some((&(a, b), rest)) = pairs.split_first() else {
        return true;
    };
    let mut found = false;
    paths(adj, a, b, used, &mut |interior| {
        if !found && route(adj, rest, used | interior) {
            found = true;
        }
        found
    });
    found
}

/// Calls `visit` with the interior vertex mask of each simple path from `a`
/// to `b` avoiding `used`; stops when `visit` returns true.
fn paths(adj: &[Vec<usize>], a: usize, b: usize, used: u64, visit: &mut dyn FnMut(u64) -> bool) -> bool {
    fn go(adj: &[Vec<usize>], v: usize, b: usize, used: u64, interior: u64, visit: &mut dyn FnMut(u64) -> bool) -> bool {
        for &w in &adj[v] {
            if w == b {
                if visit(interior) {
                    return true;
                }
            } else if (used | interior) >> w & 1 == 0 && go(adj, w, b, used, interior | 1 << w, visit) {
                return true;
            }
        }
        false
    }
    go(adj, a, b, used, 0, visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle};

    fn k33() -> Multigraph {
        let e = [1, 2, 3].iter().flat_map(|&a| [4, 5, 6].map(move |b| (a, b))).collect();
        Multigraph::new(6, e).unwrap()
    }

    #[test]
    fn small_examples() {
        assert!(is_planar(&complete(4)).unwrap());
        assert!(!is_planar(&complete(5)).unwrap());
        assert!(!is_planar(&k33()).unwrap());
        assert!(is_planar(&cycle(7)).unwrap());
        assert!(has_kuratowski_subdivision(&complete(5)));
        assert!(has_kuratowski_subdivision(&k33()));
        assert!(!has_kuratowski_subdivision(&complete(4)));
    }

    #[test]
    fn k33_minus_edge_and_octahedron() {
        let mut e: Vec<_> = k33().edges().to_vec();
        e.pop();
        assert!(is_planar(&Multigraph::new(6, e).unwrap()).unwrap());
        // octahedron: K6 minus a perfect matching, planar with 12 = 3n - 6 edges
        let oct: Vec<_> = complete(6).edges().iter().copied().filter(|&(u, v)| !(v == u + 3)).collect();
        assert!(is_planar(&Multigraph::new(6, oct).unwrap()).unwrap());
    }

    #[test]
    fn subdivided_k5_is_caught_by_both() {
        // K5 with edge (1,2) subdivided by vertex 6
        let mut e: Vec<_> = complete(5).edges().iter().copied().filter(|&p| p != (1, 2)).collect();
        e.extend([(1, 6), (6, 2)]);
        let g = Multigraph::new(6, e).unwrap();
        assert!(!is_planar(&g).unwrap());
        assert!(has_kuratowski_subdivision(&g));
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (1..=5).map(|i| (i, i % 5 + 1));
        let spokes = (1..=5).map(|i| (i, i + 5));
        let inner = (1..=5).map(|i| (i + 5, (i + 1) % 5 + 6));
        let g = Multigraph::new(10, outer.chain(spokes).chain(inner).collect()).unwrap();
        assert!(!is_planar(&g).unwrap());
    }
}
