//! Composition `a(p_x, p_y)` of truncated series.
//!
//! The coefficients of `a` beyond its box are unknown, so the result is only
//! exact where every dropped monomial `X^(Nx+1)` / `Y^(Ny+1)` of `a` is
//! provably invisible after substitution. A substitute `p` with valuations
//! `(vx, vy)` sends `X^(N+1)` to something of x-valuation `(N+1)vx` and
//! y-valuation `(N+1)vy` (and total degree `(N+1)vt`), so the result box
//! must stay strictly below one of those. The largest admissible box is used.

use num_traits::One;

use super::{BiSeries, Result, SeriesError, Trunc, Var};

/// One way of bounding the result box so that a dropped tail stays invisible.
#[derive(Clone, Copy, Debug, Default)]
struct Limit {
    x: Option<u32>,
    y: Option<u32>,
    total: Option<u32>,
}

/// Admissible limits contributed by a single source variable truncated at `n`.
fn limits(p: &BiSeries, n: u32) -> Vec<Limit> {
    let (Some(vx), Some(vy)) = (p.valuation(Var::X), p.valuation(Var::Y)) else {
        return vec![Limit::default()];
    };
    let vt = p.terms().map(|(i, j, _)| i + j).min().unwrap_or(0);
    let bound = |v: u32| ((n as u64 + 1) * v as u64 - 1).min(u32::MAX as u64 / 2) as u32;
    let mut out = Vec::new();
    if vx > 0 {
        out.push(Limit { x: Some(bound(vx)), ..Limit::default() });
    }
    if vy > 0 {
        out.push(Limit { y: Some(bound(vy)), ..Limit::default() });
    }
    if vt > 0 {
        out.push(Limit { total: Some(bound(vt)), ..Limit::default() });
    }
    out
}

fn opt_min(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Largest box inside `target` satisfying the combined limit.
fn best_box(target: Trunc, l: Limit) -> Trunc {
    let bx = l.x.map_or(target.x, |v| v.min(target.x));
    let by = l.y.map_or(target.y, |v| v.min(target.y));
    match l.total {
        None => Trunc::new(bx, by),
        Some(t) => {
            let mut best = Trunc::new(bx.min(t), by.min(t - bx.min(t)));
            for i in 0..=bx.min(t) {
                let cand = Trunc::new(i, by.min(t - i));
                if (cand.cells(), cand.x) > (best.cells(), best.x) {
                    best = cand;
                }
            }
            best
        }
    }
}

fn is_identity(p: &BiSeries, v: Var) -> bool {
    let key = match v {
        Var::X => (1, 0),
        Var::Y => (0, 1),
    };
    p.len() == 1 && p.coeff(key.0, key.1).is_one()
}

impl BiSeries {
    /// Computes `self(px, py)` on the largest box where the result is exact.
    pub fn substitute(&self, px: &BiSeries, py: &BiSeries) -> Result<BiSeries> {
        let target = px.trunc().min(py.trunc());
        let lx = limits(px, self.trunc().x);
        let ly = limits(py, self.trunc().y);
        if lx.is_empty() || ly.is_empty() {
            return Err(SeriesError::ValuationError(
                "substituted series must have no constant term".into(),
            ));
        }
        let mut best: Option<Trunc> = None;
        for a in &lx {
            for b in &ly {
                let combined = Limit {
                    x: opt_min(a.x, b.x),
                    y: opt_min(a.y, b.y),
                    total: opt_min(a.total, b.total),
                };
                let t = best_box(target, combined);
                if best.is_none_or(|bt| (t.cells(), t.x) > (bt.cells(), bt.x)) {
                    best = Some(t);
                }
            }
        }
        let bx = best.expect("at least one admissible box");
        Ok(self.substitute_in(&px.restrict(bx), &py.restrict(bx), bx))
    }

    /// Substitution with the result box chosen by the caller (already validated).
    fn substitute_in(&self, px: &BiSeries, py: &BiSeries, bx: Trunc) -> BiSeries {
        let max_i = self.terms().map(|(i, _, _)| i).max().unwrap_or(0);
        let x_id = is_identity(px, Var::X);
        let mut powers: Vec<BiSeries> = Vec::new();
        if !x_id {
            powers.push(BiSeries::one(bx));
            for k in 1..=max_i {
                let next = &powers[k as usize - 1] * px;
                let done = next.is_zero();
                powers.push(next);
                if done {
                    break;
                }
            }
        }
        // Group by power of Y: poly_j = sum_i c_ij px^i.
        let mut groups: std::collections::BTreeMap<u32, BiSeries> = Default::default();
        for (i, j, c) in self.terms() {
            let g = groups.entry(j).or_insert_with(|| BiSeries::zero(bx));
            if x_id {
                g.accumulate(i, 0, c.clone());
            } else if let Some(p) = powers.get(i as usize) {
                for (a, b, d) in p.terms() {
                    g.accumulate(a, b, c * d);
                }
            }
        }
        if is_identity(py, Var::Y) {
            let mut out = BiSeries::zero(bx);
            for (j, g) in groups {
                for (a, b, c) in g.terms() {
                    out.accumulate(a, b + j, c.clone());
                }
            }
            return out;
        }
        if py.is_zero() {
            return groups.remove(&0).unwrap_or_else(|| BiSeries::zero(bx));
        }
        // Horner in py.
        let mut out = BiSeries::zero(bx);
        let top = groups.keys().next_back().copied().unwrap_or(0);
        for j in (0..=top).rev() {
            if j < top {
                out = &out * py;
            }
            if let Some(g) = groups.get(&j) {
                out = &out + g;
            }
        }
        out
    }
}
