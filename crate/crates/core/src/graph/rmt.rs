//! Decomposition of a 2-connected multigraph into bricks by repeated split
//! operations, and the inverse gluing.
//!
//! A split candidate at a vertex pair `{u, v}` is a bipartition `E1 | E2` of
//! the edges where `E1` is connected modulo `{u, v}` (it is a single
//! separation class: a lone `u–v` edge, or a component of `G - {u, v}`
//! together with its attaching edges), `|E1|, |E2| >= 2`, and `G[E2]` is
//! 2-connected. Splitting replaces the piece by `E1 + e` and `E2 + e` for a
//! fresh virtual edge `e = uv`. Once no candidate remains, every piece is a
//! ring (R), a multi-edge (M) or a 3-connected graph (T).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use super::{GraphError, Multigraph, Result};

/// Edge identifier inside a brick: positive for an original edge label,
/// negative for a virtual edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub i64);

impl EdgeId {
    pub fn is_virtual(self) -> bool {
        self.0 < 0
    }

    /// Ordering key placing real edges (ascending) before virtual ones (-1, -2, ...).
    fn key(self) -> (bool, u64) {
        (self.is_virtual(), self.0.unsigned_abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BrickEdge {
    /// Smaller endpoint.
    pub u: usize,
    pub v: usize,
    pub id: EdgeId,
}

impl BrickEdge {
    fn new(a: usize, b: usize, id: EdgeId) -> Self {
        BrickEdge { u: a.min(b), v: a.max(b), id }
    }
}

impl Serialize for BrickEdge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.u, self.v, self.id.0).serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BrickType {
    R,
    M,
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Brick {
    #[serde(rename = "type")]
    pub kind: BrickType,
    pub edges: Vec<BrickEdge>,
}

impl Brick {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.u == v || e.v == v)
    }

    pub fn real_edges(&self) -> impl Iterator<Item = &BrickEdge> {
        self.edges.iter().filter(|e| !e.id.is_virtual())
    }

    pub fn virtual_edges(&self) -> impl Iterator<Item = &BrickEdge> {
        self.edges.iter().filter(|e| e.id.is_virtual())
    }

    fn sort_key(&self) -> (BrickType, Vec<(bool, u64)>) {
        (self.kind, self.edges.iter().map(|e| e.id.key()).collect())
    }
}

/// A link `(brick a, virtual edge, brick b)` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RmtTree {
    pub bricks: Vec<Brick>,
    pub links: Vec<Link>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedRmtTree {
    pub pointed_vertex: usize,
    #[serde(flatten)]
    pub tree: RmtTree,
}

/// A split available in the current state of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCandidate {
    pub piece: usize,
    pub u: usize,
    pub v: usize,
    pub e1: Vec<EdgeId>,
    /// Smallest edge id on the other side, for canonical ordering.
    pub e2_min: EdgeId,
}

type Piece = Vec<BrickEdge>;

fn piece_graph(p: &[BrickEdge]) -> (Multigraph, Vec<usize>) {
    let verts: Vec<usize> = p.iter().flat_map(|e| [e.u, e.v]).collect::<BTreeSet<_>>().into_iter().collect();
    let pos = |w: usize| verts.binary_search(&w).expect("vertex of piece") + 1;
    let g = Multigraph::new(verts.len(), p.iter().map(|e| (pos(e.u), pos(e.v))).collect())
        .expect("piece is a valid multigraph");
    (g, verts)
}

/// Separation classes of a piece at `{u, v}`, as lists of indices into the piece.
fn separation_classes(p: &[BrickEdge], u: usize, v: usize) -> Vec<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(p: &mut BTreeMap<usize, usize>, a: usize) -> usize {
        let mut r = a;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        p.insert(a, r);
        r
    }
    let outside = |w: usize| w != u && w != v;
    for e in p {
        for w in [e.u, e.v] {
            if outside(w) {
                parent.entry(w).or_insert(w);
            }
        }
    }
    for e in p {
        if outside(e.u) && outside(e.v) {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent.insert(a, b);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut out = Vec::new();
    for (k, e) in p.iter().enumerate() {
        if !outside(e.u) && !outside(e.v) {
            out.push(vec![k]);
        } else {
            let w = if outside(e.u) { e.u } else { e.v };
            let r = find(&mut parent, w);
            by_root.entry(r).or_default().push(k);
        }
    }
    out.extend(by_root.into_values());
    out
}

/// Split candidates of one piece in canonical order; stops after the first if `first_only`.
fn piece_candidates(p: &[BrickEdge], piece: usize, first_only: bool) -> Vec<SplitCandidate> {
    let verts: Vec<usize> = p.iter().flat_map(|e| [e.u, e.v]).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = Vec::new();
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            let classes = separation_classes(p, u, v);
            if classes.len() < 2 {
                continue;
            }
            let mut found: Vec<SplitCandidate> = Vec::new();
            for (ci, c) in classes.iter().enumerate() {
                let e2_len = p.len() - c.len();
                if c.len() < 2 || e2_len < 2 {
                    continue;
                }
                if classes.len() == 2 {
                    let rest: Piece = classes[1 - ci].iter().map(|&k| p[k]).collect();
                    if !piece_graph(&rest).0.is_two_connected() {
                        continue;
                    }
                }
                let mut e1: Vec<EdgeId> = c.iter().map(|&k| p[k].id).collect();
                e1.sort_unstable();
                let e2_min = (0..p.len()).filter(|k| !c.contains(k)).map(|k| p[k].id).min().expect("nonempty");
                found.push(SplitCandidate { piece, u, v, e1, e2_min });
            }
            found.sort_by_key(|c| c.e2_min);
            for c in found {
                out.push(c);
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

fn classify(p: &[BrickEdge]) -> Result<BrickType> {
    let (g, verts) = piece_graph(p);
    if verts.len() == 2 && p.len() >= 3 {
        return Ok(BrickType::M);
    }
    if p.len() >= 3 && p.len() == verts.len() && (1..=g.n()).all(|w| g.degree(w) == 2) && g.is_connected() {
        return Ok(BrickType::R);
    }
    if g.is_three_connected() {
        return Ok(BrickType::T);
    }
    Err(GraphError::InvalidTree(format!("piece with edges {:?} is not a brick", p.iter().map(|e| e.id.0).collect::<Vec<_>>())))
}

/// Runs the split loop; `choose` picks which of the currently available
/// candidates to apply (any choice yields the same canonical result).
pub fn rmt_tree_with_order<F>(g: &Multigraph, mut choose: F) -> Result<RmtTree>
where
    F: FnMut(&[SplitCandidate]) -> usize,
{
    if !g.is_two_connected() {
        return Err(GraphError::NotTwoConnected);
    }
    if g.m() < 3 {
        return Err(GraphError::TooFewEdges(g.m()));
    }
    let mut pieces: Vec<Piece> = vec![g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| BrickEdge::new(a, b, EdgeId(k as i64 + 1)))
        .collect()];
    let mut next_virtual = 1i64;
    loop {
        let cands: Vec<SplitCandidate> =
            pieces.iter().enumerate().flat_map(|(i, p)| piece_candidates(p, i, false)).collect();
        if cands.is_empty() {
            break;
        }
        let pick = choose(&cands).min(cands.len() - 1);
        apply_split(&mut pieces, &cands[pick], &mut next_virtual);
    }
    finish(pieces)
}

fn apply_split(pieces: &mut Vec<Piece>, c: &SplitCandidate, next_virtual: &mut i64) {
    let id = EdgeId(-*next_virtual);
    *next_virtual += 1;
    let old = std::mem::take(&mut pieces[c.piece]);
    let (mut e1, mut e2): (Piece, Piece) = old.into_iter().partition(|e| c.e1.binary_search(&e.id).is_ok());
    e1.push(BrickEdge::new(c.u, c.v, id));
    e2.push(BrickEdge::new(c.u, c.v, id));
    pieces[c.piece] = e2;
    pieces.push(e1);
}

/// The RMT-tree of a 2-connected graph with at least 3 edges, splitting in canonical order.
pub fn rmt_tree(g: &Multigraph) -> Result<RmtTree> {
    if !g.is_two_connected() {
        return Err(GraphError::NotTwoConnected);
    }
    if g.m() < 3 {
        return Err(GraphError::TooFewEdges(g.m()));
    }
    let mut pieces: Vec<Piece> = vec![g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| BrickEdge::new(a, b, EdgeId(k as i64 + 1)))
        .collect()];
    let mut next_virtual = 1i64;
    // pieces that are already split-free never become splittable again
    let mut done = vec![false];
    'outer: loop {
        for i in 0..pieces.len() {
            if done[i] {
                continue;
            }
            if let Some(c) = piece_candidates(&pieces[i], i, true).pop() {
                apply_split(&mut pieces, &c, &mut next_virtual);
                done.push(false);
                continue 'outer;
            }
            done[i] = true;
        }
        break;
    }
    finish(pieces)
}

fn finish(pieces: Vec<Piece>) -> Result<RmtTree> {
    let bricks = pieces
        .into_iter()
        .map(|p| Ok(Brick { kind: classify(&p)?, edges: p }))
        .collect::<Result<Vec<_>>>()?;
    canonicalize(bricks)
}

fn links_of(bricks: &[Brick]) -> Result<Vec<Link>> {
    let mut seen: BTreeMap<EdgeId, Vec<(usize, BrickEdge)>> = BTreeMap::new();
    for (i, b) in bricks.iter().enumerate() {
        for e in b.virtual_edges() {
            seen.entry(e.id).or_default().push((i, *e));
        }
    }
    let mut links = Vec::new();
    for (id, occ) in seen {
        match occ.as_slice() {
            [(a, ea), (b, eb)] if a != b && (ea.u, ea.v) == (eb.u, eb.v) => {
                links.push(Link { a: *a.min(b), b: *a.max(b), edge: id })
            }
            _ => {
                return Err(GraphError::InvalidTree(format!(
                    "virtual edge {} must join exactly two bricks at the same endpoints",
                    id.0
                )))
            }
        }
    }
    links.sort();
    Ok(links)
}

/// Renumbers virtual edges and orders bricks so that the result depends only
/// on the decomposition, not on the order of splits.
fn canonicalize(bricks: Vec<Brick>) -> Result<RmtTree> {
    let links = links_of(&bricks)?;
    let nb = bricks.len();
    let mut adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); nb];
    for l in &links {
        adj[l.a].push((l.b, l.edge));
        adj[l.b].push((l.a, l.edge));
    }
    let global_min = bricks.iter().flat_map(|b| b.real_edges().map(|e| e.id)).min();
    // each virtual edge is identified by the real edges on the side without the minimum label
    let mut keyed: Vec<(Vec<i64>, EdgeId)> = Vec::new();
    for l in &links {
        let mut side = Vec::new();
        let mut stack = vec![l.a];
        let mut seen = vec![false; nb];
        seen[l.a] = true;
        while let Some(b) = stack.pop() {
            side.extend(bricks[b].real_edges().map(|e| e.id.0));
            for &(c, id) in &adj[b] {
                if id != l.edge && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        side.sort_unstable();
        if global_min.is_some_and(|m| side.binary_search(&m.0).is_ok()) {
            let mut all: Vec<i64> = bricks.iter().flat_map(|b| b.real_edges().map(|e| e.id.0)).collect();
            all.retain(|x| side.binary_search(x).is_err());
            all.sort_unstable();
            side = all;
        }
        keyed.push((side, l.edge));
    }
    keyed.sort();
    let rename: BTreeMap<EdgeId, EdgeId> =
        keyed.iter().enumerate().map(|(k, (_, old))| (*old, EdgeId(-(k as i64) - 1))).collect();
    let mut bricks: Vec<Brick> = bricks
        .into_iter()
        .map(|mut b| {
            for e in &mut b.edges {
                if let Some(&n) = rename.get(&e.id) {
                    e.id = n;
                }
            }
            b.edges.sort_by_key(|e| e.id.key());
            b
        })
        .collect();
    bricks.sort_by_key(|b| b.sort_key());
    let links = links_of(&bricks)?;
    Ok(RmtTree { bricks, links })
}

impl RmtTree {
    pub fn node_count(&self) -> usize {
        self.bricks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.links.len()
    }

    /// Validates all invariants: brick shapes, matched virtual edges, tree
    /// shape, and the absence of R–R and M–M links.
    pub fn validate(&self) -> Result<()> {
        for b in &self.bricks {
            let kind = classify(&b.edges)?;
            if kind != b.kind {
                return Err(GraphError::InvalidTree(format!("brick labelled {:?} is a {:?}", b.kind, kind)));
            }
        }
        let links = links_of(&self.bricks)?;
        if links != self.links {
            return Err(GraphError::InvalidTree("link list does not match the virtual edges".into()));
        }
        if self.links.len() + 1 != self.bricks.len() {
            return Err(GraphError::InvalidTree("link graph is not a tree".into()));
        }
        let mut seen = vec![false; self.bricks.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for l in &self.links {
                for (p, q) in [(l.a, l.b), (l.b, l.a)] {
                    if p == b && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::InvalidTree("link graph is disconnected".into()));
        }
        for l in &self.links {
            let (ka, kb) = (self.bricks[l.a].kind, self.bricks[l.b].kind);
            if ka == kb && ka != BrickType::T {
                return Err(GraphError::InvalidTree(format!("forbidden {ka:?}–{kb:?} adjacency")));
            }
        }
        Ok(())
    }
}

/// Glues bricks along their virtual edges and erases those edges.
pub fn recompose(t: &RmtTree) -> Result<Multigraph> {
    if t.bricks.is_empty() {
        return Err(GraphError::InvalidTree("no bricks".into()));
    }
    t.validate()?;
    let mut real: Vec<BrickEdge> = t.bricks.iter().flat_map(|b| b.real_edges().copied()).collect();
    real.sort_by_key(|e| e.id);
    for (k, e) in real.iter().enumerate() {
        if e.id.0 != k as i64 + 1 {
            return Err(GraphError::InvalidTree("real edge labels are not 1..m".into()));
        }
    }
    let n = real.iter().map(|e| e.v).max().unwrap_or(0);
    Multigraph::new(n, real.iter().map(|e| (e.u, e.v)).collect())
}

/// Restriction of the RMT-tree to the bricks containing `v`.
pub fn restricted_rmt_tree(g: &Multigraph, v: usize) -> Result<RestrictedRmtTree> {
    if v == 0 || v > g.n() {
        return Err(GraphError::UnknownVertex(v));
    }
    let full = rmt_tree(g)?;
    let keep: Vec<usize> = (0..full.bricks.len()).filter(|&i| full.bricks[i].contains_vertex(v)).collect();
    let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let bricks: Vec<Brick> = keep.iter().map(|&i| full.bricks[i].clone()).collect();
    let links: Vec<Link> = full
        .links
        .iter()
        .filter_map(|l| match (index.get(&l.a), index.get(&l.b)) {
            (Some(&a), Some(&b)) => Some(Link { a, b, edge: l.edge }),
            _ => None,
        })
        .collect();
    let tree = RmtTree { bricks, links };
    if tree.links.len() + 1 != tree.bricks.len() || !tree_connected(&tree) {
        return Err(GraphError::InvalidTree(format!("bricks containing vertex {v} do not form a subtree")));
    }
    Ok(RestrictedRmtTree { pointed_vertex: v, tree })
}

fn tree_connected(t: &RmtTree) -> bool {
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
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    fn kinds(t: &RmtTree) -> Vec<BrickType> {
        t.bricks.iter().map(|b| b.kind).collect()
    }

    #[test]
    fn triangle_is_one_ring() {
        let t = rmt_tree(&cycle(3)).unwrap();
        assert_eq!(kinds(&t), vec![BrickType::R]);
        assert!(t.links.is_empty());
        assert_eq!(recompose(&t).unwrap(), cycle(3).normalized());
    }

    #[test]
    fn theta_is_bond_with_three_triangles() {
        let g = theta();
        let t = rmt_tree(&g).unwrap();
        assert_eq!(kinds(&t), vec![BrickType::R, BrickType::R, BrickType::R, BrickType::M]);
        assert_eq!(t.links.len(), 3);
        let m = &t.bricks[3];
        assert_eq!(m.virtual_edges().count(), 3);
        assert_eq!(m.real_edges().count(), 0);
        assert_eq!(recompose(&t).unwrap(), g.normalized());
    }

    #[test]
    fn k4_is_single_t_brick() {
        let t = rmt_tree(&complete(4)).unwrap();
        assert_eq!(kinds(&t), vec![BrickType::T]);
    }

    #[test]
    fn long_cycle_is_split_free() {
        let t = rmt_tree(&cycle(6)).unwrap();
        assert_eq!(kinds(&t), vec![BrickType::R]);
    }

    #[test]
    fn bond_of_four_edges() {
        let g = Multigraph::new(2, vec![(1, 2); 4]).unwrap();
        assert_eq!(kinds(&rmt_tree(&g).unwrap()), vec![BrickType::M]);
    }

    #[test]
    fn preconditions() {
        assert_eq!(rmt_tree(&path(3)), Err(GraphError::NotTwoConnected));
        let two = Multigraph::new(2, vec![(1, 2), (1, 2)]).unwrap();
        assert_eq!(rmt_tree(&two), Err(GraphError::TooFewEdges(2)));
        assert_eq!(restricted_rmt_tree(&theta(), 9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn restricted_trees_of_theta() {
        let g = theta();
        let r = restricted_rmt_tree(&g, 3).unwrap();
        assert_eq!(kinds(&r.tree), vec![BrickType::R]);
        let pole = restricted_rmt_tree(&g, 1).unwrap();
        assert_eq!(pole.tree.bricks.len(), 4);
        assert_eq!(pole.tree.links.len(), 3);
        let k4 = restricted_rmt_tree(&complete(4), 2).unwrap();
        assert_eq!(kinds(&k4.tree), vec![BrickType::T]);
    }

    #[test]
    fn r_r_adjacency_is_rejected() {
        let tri = |a, b, c, id: i64, vid: i64| Brick {
            kind: BrickType::R,
            edges: vec![
                BrickEdge::new(a, b, EdgeId(id)),
                BrickEdge::new(b, c, EdgeId(id + 1)),
                BrickEdge::new(a, c, EdgeId(vid)),
            ],
        };
        let t = RmtTree {
            bricks: vec![tri(1, 2, 3, 1, -1), tri(1, 4, 3, 3, -1)],
            links: vec![Link { a: 0, b: 1, edge: EdgeId(-1) }],
        };
        assert!(matches!(recompose(&t), Err(GraphError::InvalidTree(_))));
    }

    #[test]
    fn split_order_does_not_matter() {
        // wheel W5 with a doubled spoke and a pendant ring
        let g = Multigraph::new(
            8,
            vec![(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5), (5, 2), (1, 2), (2, 6), (6, 7), (7, 8), (8, 3)],
        )
        .unwrap();
        let canonical = rmt_tree(&g).unwrap();
        canonical.validate().unwrap();
        for start in 0..5 {
            let mut k = start;
            let t = rmt_tree_with_order(&g, |c| {
                k = (k * 7 + 3) % 11;
                k % c.len()
            })
            .unwrap();
            assert_eq!(t, canonical);
        }
        assert_eq!(recompose(&canonical).unwrap(), g.normalized());
    }
}
