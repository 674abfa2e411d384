//! Planar maps with labelled half-edges, counted via rotation systems.
//!
//! A map on half-edges `0..2m` is a pair `(α, σ)`: `α` a fixed-point-free
//! involution (the edges) and `σ` a permutation whose cycles are the
//! vertices with their cyclic order. Faces are the cycles of `σ∘α`. The map
//! is planar when `⟨α, σ⟩` is transitive and `V − E + F = 2`. Relabelling
//! acts transitively on involutions and preserves planarity, so it suffices
//! to fix `α = (0 1)(2 3)…` and multiply by the number of perfect matchings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{OracleError, Result};
use crate::series::Rational;

pub const MAP_MAX_EDGES: usize = 4;

/// Counts of planar maps with `m` edges, keyed by vertex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCensus {
    pub edges: usize,
    /// Half-edge labelled maps: pairs `(α, σ)`.
    pub labelled: BTreeMap<usize, BigInt>,
    /// Rooted maps (a marked half-edge, labels forgotten); rooted maps have
    /// no symmetries, so this is `2m · labelled / (2m)!`.
    pub rooted: BTreeMap<usize, BigInt>,
    /// Vertex-pointed maps in the exponential normalisation `V · labelled / (2m)!`;
    /// symmetric maps contribute fractions.
    pub pointed: BTreeMap<usize, Rational>,
    /// Every retained map satisfied Euler's formula and had total face degree `2m`.
    pub consistent: bool,
}

impl MapCensus {
    pub fn total_rooted(&self) -> BigInt {
        self.rooted.values().sum()
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn cycles(p: &[usize]) -> (usize, usize) {
    // (number of cycles, sum of cycle lengths)
    let mut seen = vec![false; p.len()];
    let (mut count, mut total) = (0, 0);
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            total += 1;
            h = p[h];
        }
    }
    (count, total)
}

fn transitive(sigma: &[usize]) -> bool {
    let k = sigma.len();
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(h) = stack.pop() {
        for g in [sigma[h], h ^ 1] {
            if !seen[g] {
                seen[g] = true;
                count += 1;
                stack.push(g);
            }
        }
    }
    count == k
}

fn for_each_permutation(k: usize, f: &mut dyn FnMut(&[usize])) {
    // Heap's algorithm
    let mut p: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    f(&p);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Enumerates planar maps with `m_edges` edges (`1 ≤ m ≤ 4`).
pub fn enum_rooted_maps(m_edges: usize) -> Result<MapCensus> {
    if m_edges == 0 || m_edges > MAP_MAX_EDGES {
        return Err(OracleError::SizeLimit { what: "map enumeration (edges)", size: m_edges, max: MAP_MAX_EDGES });
    }
    let k = 2 * m_edges;
    let mut by_v: BTreeMap<usize, u64> = BTreeMap::new();
    let mut consistent = true;
    let mut phi = vec![0usize; k];
    for_each_permutation(k, &mut |sigma| {
        if !transitive(sigma) {
            return;
        }
        for h in 0..k {
            phi[h] = sigma[h ^ 1];
        }
        let (v, _) = cycles(sigma);
        let (f, degree) = cycles(&phi);
        if v + f == m_edges + 2 {
            consistent &= degree == k;
            *by_v.entry(v).or_default() += 1;
        }
    });
    let matchings: BigInt = (1..k).step_by(2).map(BigInt::from).product();
    let fact = factorial(k);
    let mut census = MapCensus {
        edges: m_edges,
        labelled: BTreeMap::new(),
        rooted: BTreeMap::new(),
        pointed: BTreeMap::new(),
        consistent,
    };
    for (v, c) in by_v {
        let labelled = BigInt::from(c) * &matchings;
        let rooted = Rational::new(&labelled * BigInt::from(k), fact.clone());
        census.consistent &= rooted.is_integer();
        census.rooted.insert(v, rooted.to_integer());
        census.pointed.insert(v, Rational::new(&labelled * BigInt::from(v), fact.clone()));
        census.labelled.insert(v, labelled);
    }
    census.rooted.retain(|_, c| !c.is_zero());
    Ok(census)
}
