//! Map networks, 3-connected maps, and the planar terminal series.

use super::general::Eta;
use super::{flip, konst, mono, one, ratio, require, xvar, yvar, Diagnostics, Result};
use crate::grammar::{EdgeMode, FamilyTerminals};
use crate::series::{int, rat, BiSeries, Expr, SeriesSystem, Trunc};

/// Networks of maps in `(x, y)`; the components of a parallel network are
/// ordered, so `P = (D − P)·D`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapNetworks {
    /// The η series with `t²` replaced by `y`.
    pub eta1: BiSeries,
    pub eta2: BiSeries,
    pub d: BiSeries,
    pub s: BiSeries,
    pub p: BiSeries,
    pub h: BiSeries,
}

/// Networks from the rooted 2-connected maps: `D = (η₁+η₂−3η₁η₂ − y − xy)/(xy)`.
/// The result box is one order below that of `eta` in both `x` and `y = t²`.
pub fn map_network_series(eta: &Eta, diag: &mut Diagnostics) -> Result<MapNetworks> {
    let eta1 = eta.eta1.compress_y(2)?;
    let eta2 = eta.eta2.compress_y(2)?;
    let l = eta.l_rooted.compress_y(2)?;
    let t = l.trunc();
    let (x, y) = (xvar(t), yvar(t));
    let d = (&(&l - &y) - &(&x * &y)).divide_by_monomial(1, 1)?;
    let t = d.trunc();
    let (x, y) = (xvar(t), yvar(t));
    let o = one(t);
    let xd = &x * &d;
    let s = ratio(&(&xd * &d), &(&o + &xd))?;
    let p = ratio(&(&d * &d), &(&o + &d))?;
    let h = &(&(&d - &s) - &p) - &y;

    diag.compare("map networks: S = (D - S) x D", &s, &(&(&d - &s) * &xd));
    diag.compare("map networks: P = (D - P) D", &p, &(&(&d - &p) * &d));
    // x t² D(x, t²) = →L − (1 + x) t², read back in (x, t)
    let tt = Trunc::new(t.x, 2 * t.y + 1);
    let lhs = d.map_exponents(tt, |i, j| Some((i + 1, 2 * j + 2)));
    let x_t = xvar(eta.l_rooted.trunc());
    let rhs = &eta.l_rooted - &(&(&one(x_t.trunc()) + &x_t) * &mono(0, 2, x_t.trunc()));
    diag.compare("map networks: x t^2 D(x, t^2) = rooted 2-connected maps - (1 + x) t^2", &lhs, &rhs.restrict(tt));
    Ok(MapNetworks {
        eta1: eta1.restrict(t),
        eta2: eta2.restrict(t),
        d,
        s,
        p,
        h,
    })
}

/// Solution of the γ system in `(x, w)` and rooted 3-connected maps.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamma {
    pub gamma1: BiSeries,
    pub gamma2: BiSeries,
    /// `→K` from its closed γ-form, one order below the γ box in both variables.
    pub k_rooted: BiSeries,
}

/// Solves `γ₁ = xw(1+γ₂)²`, `γ₂ = w(1+γ₁)²` on `trunc`.
pub fn gamma_series(trunc: Trunc) -> Result<Gamma> {
    let mut sys = SeriesSystem::new();
    let g1 = sys.unknown("gamma1");
    let g2 = sys.unknown("gamma2");
    let one_e = || Expr::konst(int(1));
    sys.define(&g1, Expr::x() * Expr::y() * (one_e() + g2.clone()).pow(2))?;
    sys.define(&g2, Expr::y() * (one_e() + g1.clone()).pow(2))?;
    let sol = sys.solve(trunc)?;
    let gamma1 = sol.get("gamma1")?.clone();
    let gamma2 = sol.get("gamma2")?.clone();
    let k_rooted = k_rooted_closed(&gamma1, &gamma2)?;
    Ok(Gamma { gamma1, gamma2, k_rooted })
}

fn g_sum(g1: &BiSeries, g2: &BiSeries) -> BiSeries {
    &(&one(g1.trunc()) + g1) + g2
}

/// `→K = w − xw²/(1+xw) − w²/(1+w) − γ₁γ₂/(xw(1+γ₁+γ₂)³)`.
fn k_rooted_closed(g1: &BiSeries, g2: &BiSeries) -> Result<BiSeries> {
    let p = (g1 * g2).divide_by_monomial(1, 1)?;
    let t = p.trunc();
    let (g1, g2) = (g1.restrict(t), g2.restrict(t));
    let (x, w, o) = (xvar(t), yvar(t), one(t));
    let xw = &x * &w;
    let a = ratio(&(&xw * &w), &(&o + &xw))?;
    let b = ratio(&(&w * &w), &(&o + &w))?;
    let c = ratio(&p, &g_sum(&g1, &g2).pow(3))?;
    Ok(&(&(&w - &a) - &b) - &c)
}

/// `Y(x, w) = γ₂(1+γ₂)²/(1+γ₁+γ₂)³`, the edge variable whose networks are `w`.
fn y_of_w(g1: &BiSeries, g2: &BiSeries) -> Result<BiSeries> {
    let o = one(g2.trunc());
    ratio(&(g2 * &(&o + g2).pow(2)), &g_sum(g1, g2).pow(3))
}

/// Cross-checks of the γ system against the map networks.
pub fn gamma_checks(gamma: &Gamma, nets: &MapNetworks, diag: &mut Diagnostics) -> Result<()> {
    let (g1, g2) = (&gamma.gamma1, &gamma.gamma2);
    let t = nets.d.trunc();
    let x = xvar(t);
    let k_at_d = gamma.k_rooted.substitute(&x, &nets.d)?;
    diag.compare("rooted 3-connected maps: network route = closed form", &k_at_d, &nets.h);

    // η ↔ γ with w = D(x, y)
    let den = (&(&one(t) - &nets.eta1) - &nets.eta2).inv()?;
    let h1 = &nets.eta1 * &den;
    let h2 = &nets.eta2 * &den;
    diag.compare("gamma1(x, D) = eta1/(1 - eta1 - eta2)", &g1.substitute(&x, &nets.d)?, &h1);
    diag.compare("gamma2(x, D) = eta2/(1 - eta1 - eta2)", &g2.substitute(&x, &nets.d)?, &h2);
    let back = g_sum(&h1, &h2).inv()?;
    diag.compare("eta -> gamma -> eta: eta1", &(&h1 * &back), &nets.eta1);
    diag.compare("eta -> gamma -> eta: eta2", &(&h2 * &back), &nets.eta2);

    // the edge variable in terms of w, two ways, and D(x, Y(x, w)) = w
    let y1 = y_of_w(g1, g2)?;
    let y2 = ratio(&(g1 * g2).divide_by_monomial(1, 1)?, &g_sum(g1, g2).pow(3))?;
    diag.compare("Y(x, w): two closed forms agree", &y1, &y2);
    let tw = y1.trunc();
    diag.compare("D(x, Y(x, w)) = w", &nets.d.substitute(&xvar(tw), &y1)?, &yvar(tw));

    // the swap x -> 1/x, w -> xw exchanges γ₁ and γ₂
    let swap_box = Trunc::new(g1.trunc().x, g1.trunc().y.min(g1.trunc().x));
    diag.compare("gamma1(1/x, xw) = gamma2(x, w)", &flip(g1, swap_box)?, g2);
    diag.compare("gamma2(1/x, xw) = gamma1(x, w)", &flip(g2, swap_box)?, g1);
    Ok(())
}

/// The six groups of the closed form of `K′`, or of `K′(1/x, xw)` when
/// `swapped` (realised by exchanging the roles of γ₁ and γ₂).
fn k_pointed_closed(g1: &BiSeries, g2: &BiSeries, swapped: bool) -> Result<BiSeries> {
    let t0 = g1.trunc().min(g2.trunc());
    let (x, w, o) = (xvar(t0), yvar(t0), one(t0));
    let xw = &x * &w;
    let g = g_sum(g1, g2);
    let p = g1 * g2;
    let g2inv = g.pow(2).inv()?;
    let g3inv = g.pow(3).inv()?;
    let half = rat(1, 2);
    let t1 = (&o - &(&p * &g2inv)).log()?.scale(&int(-1));
    let t4 = (&p * &g2inv).scale(&int(-3));
    let lead = |a: &BiSeries, b: &BiSeries| -> Result<BiSeries> {
        // log(1 + a(1+a)/((1+γ₁+γ₂)(1+b)))
        let arg = &o + &ratio(&(a * &(&o + a)), &(&g * &(&o + b)))?;
        Ok(arg.log()?)
    };
    let sum = if !swapped {
        let t2 = &x * &lead(g2, g1)?;
        let t3 = -ratio(&(&(&o + &g2.scale(&half)) + &(&xw * &(&(&o + g1) * &(&o + g2)))), &g)?;
        let num = &p * &(&(&o + &x.scale(&int(2))) + &xw.scale(&int(2)));
        let t5 = -(&num.divide_by_monomial(1, 1)? * &g3inv).scale(&half);
        let t6 = &(&(&(&(&o - &ratio(&w, &(&o + &xw))?.scale(&half)) + &w.scale(&half)) + &xw)
            - &(&xw * &w).scale(&half))
            - &(&x * &(&o + &w).log()?);
        vec![t1, t2, t3, t4, t5, t6]
    } else {
        let t2 = lead(g1, g2)?.divide_by_monomial(1, 0)?;
        let t3 = -ratio(&(&(&o + &g1.scale(&half)) + &(&w * &(&(&o + g1) * &(&o + g2)))), &g)?;
        let a = &p.divide_by_monomial(0, 1)? * &(&o + &w.scale(&int(2)));
        let b = p.divide_by_monomial(1, 1)?.scale(&int(2));
        let t5 = -(&(&a + &b) * &g3inv).scale(&half);
        let t6 = &(&(&(&(&o - &ratio(&xw, &(&o + &w))?.scale(&half)) + &xw.scale(&half)) + &w)
            - &(&xw * &w).scale(&half))
            - &(&o + &xw).log()?.divide_by_monomial(1, 0)?;
        vec![t1, t2, t3, t4, t5, t6]
    };
    let t = sum.iter().fold(t0, |acc, s| acc.min(s.trunc()));
    Ok(sum.iter().fold(BiSeries::zero(t), |acc, s| &acc + s))
}

/// `G₃` as displayed in closed form in terms of γ₁, γ₂.
fn g3_closed(g1: &BiSeries, g2: &BiSeries) -> Result<BiSeries> {
    let t0 = g1.trunc().min(g2.trunc());
    let (x, w, o) = (xvar(t0), yvar(t0), one(t0));
    let xw = &x * &w;
    let g = g_sum(g1, g2);
    let p = g1 * g2;
    let ginv = g.inv()?;
    let g2inv = g.pow(2).inv()?;
    let g3inv = g.pow(3).inv()?;
    let logs = {
        let a = (&o - &(&p * &g2inv)).log()?.scale(&int(-2));
        let b = &x * &(&o + &ratio(&(g2 * &(&o + g2)), &(&g * &(&o + g1)))?).log()?;
        let c = (&o + &ratio(&(g1 * &(&o + g1)), &(&g * &(&o + g2)))?).log()?.divide_by_monomial(1, 0)?;
        &(&a + &b) + &c
    };
    let rational = {
        let a = konst(rat(-1, 2), t0);
        let b = ginv.scale(&rat(-3, 2));
        let c = -(&(&(&w * &(&o + &x)) * &(&(&o + g1) * &(&o + g2))) * &ginv);
        let d = (&p * &g2inv).scale(&int(-6));
        let num = &p * &(&(&x + &o) + &xw);
        let e = -(&num.divide_by_monomial(1, 1)? * &g3inv).scale(&rat(3, 2));
        &(&(&(&a + &b) + &c) + &d) + &e
    };
    let rest = &(&(&(&(&(&xw * &w).scale(&rat(-1, 2)) + &xw) + &w) + &konst(int(2), t0)) - &(&x * &(&o + &w).log()?))
        - &(&o + &xw).log()?.divide_by_monomial(1, 0)?;
    let inner = &(&logs + &rational) + &rest;
    Ok((&xvar(inner.trunc()) * &inner).scale(&rat(1, 4)))
}

/// Vertex-pointed 3-connected maps computed twice.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedThreeConnected {
    /// `K′(x, w)` from the closed γ-form.
    pub k_pointed: BiSeries,
    /// `K′` obtained by removing the non-3-connected cores from `L′`, as a series in `(x, y)` with `w = D(x, y)`.
    pub k_pointed_at_d: BiSeries,
    /// The same re-expressed in `w` through `y = Y(x, w)`.
    pub k_pointed_extracted: BiSeries,
}

/// `K′` by extraction from the pointed 2-connected maps `l_pointed(x, t)` and
/// by its closed form, compared on the common box.
pub fn pointed_three_connected_maps(
    gamma: &Gamma,
    nets: &MapNetworks,
    l_pointed: &BiSeries,
    diag: &mut Diagnostics,
) -> Result<PointedThreeConnected> {
    let lp = l_pointed.compress_y(2)?;
    let t = lp.trunc().min(nets.d.trunc());
    let (x, y) = (xvar(t), yvar(t));
    let half = rat(1, 2);
    let xy = &x * &y;
    let v = &(&(&lp.restrict(t) - &xy) - &y.scale(&half)) - &(&xy * &y).scale(&half);
    let (d, s, p, h) = (nets.d.restrict(t), nets.s.restrict(t), nets.p.restrict(t), nets.h.restrict(t));
    let x2 = &x * &x;
    let ds = &d - &s;
    let v_r = (&x2 * &(&(&ds * &ds) * &d)).scale(&half);
    let v_m = &x * &(&d - &p).loga_at_least(3)?;
    let v_rm = &x * &(&s * &p);
    let v_rt = &x * &(&s * &h);
    let v_mt = &x * &(&p * &h);
    let v_tt = (&x * &(&h * &h)).scale(&half);
    let at_d = &(&(&(&(&(&(&v - &v_r) - &v_m) + &v_rm) + &v_rt) + &v_mt) + &v_tt);

    let yw = y_of_w(&gamma.gamma1, &gamma.gamma2)?;
    let tw = yw.trunc();
    let extracted = at_d.substitute(&xvar(tw), &yw)?;
    let k_pointed = k_pointed_closed(&gamma.gamma1, &gamma.gamma2, false)?;
    diag.compare("pointed 3-connected maps: extraction = closed form", &extracted, &k_pointed);
    diag.compare(
        "pointed 3-connected maps: closed form at w = D equals extraction",
        &k_pointed.substitute(&x, &d)?,
        at_d,
    );
    Ok(PointedThreeConnected { k_pointed, k_pointed_at_d: at_d.clone(), k_pointed_extracted: extracted })
}

/// 3-connected maps on a common box.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeConnectedMaps {
    pub gamma: Gamma,
    pub k_rooted: BiSeries,
    pub k_pointed: BiSeries,
    /// `K′(1/x, xw)`, the face-pointed maps divided by `x²`.
    pub k_pointed_swapped: BiSeries,
    /// `K = ½x(K′ − ½xw→K + K′(1/x, xw))`.
    pub k_unrooted: BiSeries,
}

/// Computes `K`, `K′`, `K′(1/x, xw)` and `→K` so that all are exact on `trunc`.
pub fn three_connected_maps(trunc: Trunc, diag: &mut Diagnostics) -> Result<ThreeConnectedMaps> {
    // the literal check of the swap needs x-degree up to the w-degree
    let gbox = Trunc::new(trunc.x.max(trunc.y) + 2, trunc.y + 2);
    let gamma = gamma_series(gbox)?;
    let (g1, g2) = (&gamma.gamma1, &gamma.gamma2);
    let kp = k_pointed_closed(g1, g2, false)?;
    let kps = k_pointed_closed(g1, g2, true)?;
    diag.compare("K'(1/x, xw): gamma swap = literal substitution", &kps, &flip(&kp, kps.trunc())?);

    // the −1/(2x) and 1/(2x(1+xw)) terms combine without negative powers
    let t = kp.trunc();
    let (x, w, o) = (xvar(t), yvar(t), one(t));
    let xw = &x * &w;
    let combined = ratio(&w, &(&o + &xw))?.scale(&rat(-1, 2));
    let raw = (&(&o + &xw).inv()? - &o).divide_by_monomial(1, 0)?.scale(&rat(1, 2));
    diag.compare("-1/(2x) + 1/(2x(1 + xw)) = -w/(2(1 + xw))", &combined, &raw);

    let half = rat(1, 2);
    let kr = &gamma.k_rooted;
    let inner = &(&kp - &(&(&xvar(kr.trunc()) * &yvar(kr.trunc())) * kr).scale(&half)) + &kps;
    let k = (&xvar(inner.trunc()) * &inner).scale(&half);
    diag.assert("3-connected maps: no terms below four vertices", k.terms().all(|(i, _, _)| i >= 4), || {
        "term with fewer than four vertices".into()
    });
    let r = |s: &BiSeries, what: &str| require(s, trunc, what);
    Ok(ThreeConnectedMaps {
        k_rooted: r(kr, "rooted 3-connected maps")?,
        k_pointed: r(&kp, "pointed 3-connected maps")?,
        k_pointed_swapped: r(&kps, "swapped pointed 3-connected maps")?,
        k_unrooted: r(&k, "3-connected maps")?,
        gamma,
    })
}

/// Terminal series of planar graphs on `trunc` in `(x, w)`: each 3-connected
/// planar graph has exactly two embeddings, so `G₃ = K/2`, `G₃′ = K′/2`,
/// `→G₃ = →K/2`.
pub fn planar_terminals(trunc: Trunc, diag: &mut Diagnostics) -> Result<FamilyTerminals> {
    let maps = three_connected_maps(trunc, diag)?;
    let half = rat(1, 2);
    let g3 = maps.k_unrooted.scale(&half);
    let g3_pointed = maps.k_pointed.scale(&half);
    let g3_rooted = maps.k_rooted.scale(&half);
    let closed = g3_closed(&maps.gamma.gamma1, &maps.gamma.gamma2)?;
    diag.compare("3-connected planar graphs: unrooting = closed form", &g3, &closed);
    diag.compare("3-connected planar graphs: pointed = d/dx", &g3_pointed, &g3.derivative(crate::Var::X)?);
    diag.compare("3-connected planar graphs: rooted = (2/x^2) d/dw", &g3_rooted, &g3.rooted_derivative()?);
    diag.ensure()?;
    Ok(FamilyTerminals::new(g3, g3_pointed, g3_rooted, EdgeMode::Simple)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarmaps::eta_series;
    use crate::planarmaps::general::l_pointed_closed;
    use crate::series::Rational;

    fn nets(nx: u32, ny: u32, d: &mut Diagnostics) -> (Eta, MapNetworks) {
        let eta = eta_series(Trunc::new(nx + 1, 2 * ny + 2)).unwrap();
        let n = map_network_series(&eta, d).unwrap();
        (eta, n)
    }

    #[test]
    fn network_low_order() {
        let mut d = Diagnostics::new();
        let (_, n) = nets(4, 6, &mut d);
        assert!(d.all_passed(), "{}", d.to_json_string());
        assert_eq!(n.d.coeff(0, 1), int(1));
        assert_eq!(n.d.constant_term(), int(0));
        // the tetrahedron network: 2 inner vertices, 5 edges
        let first = n.h.terms().map(|(i, j, _)| (j, i)).min().unwrap();
        assert_eq!(first, (5, 2));
        assert_eq!(n.h.coeff(2, 5), int(1));
    }

    #[test]
    fn gamma_low_order_and_checks() {
        let g = gamma_series(Trunc::new(6, 8)).unwrap();
        assert_eq!(g.gamma1.coeff(1, 1), int(1));
        assert_eq!(g.gamma1.coeff(1, 2), int(2));
        assert_eq!(g.k_rooted.coeff(2, 5), int(1));
        assert!(g.k_rooted.terms().all(|(i, j, _)| (j, i) >= (5, 2)));
        let mut d = Diagnostics::new();
        let (_, n) = nets(5, 7, &mut d);
        gamma_checks(&g, &n, &mut d).unwrap();
        assert!(d.all_passed(), "{}", d.to_json_string());
    }

    #[test]
    fn pointed_three_connected_extraction() {
        let mut d = Diagnostics::new();
        let (eta, n) = nets(5, 8, &mut d);
        let lp = l_pointed_closed(&eta.eta1, &eta.eta2).unwrap();
        let g = gamma_series(Trunc::new(7, 10)).unwrap();
        let k = pointed_three_connected_maps(&g, &n, &lp, &mut d).unwrap();
        assert!(d.all_passed(), "{}", d.to_json_string());
        assert_eq!(k.k_pointed.coeff(3, 6), rat(1, 3));
        assert!(k.k_pointed.terms().all(|(i, j, _)| i >= 3 && j >= 6));
    }

    #[test]
    fn terminals_contain_k4() {
        let mut d = Diagnostics::new();
        let t = planar_terminals(Trunc::new(6, 10), &mut d).unwrap();
        assert!(d.all_passed(), "{}", d.to_json_string());
        assert_eq!(t.g3.coeff(4, 6), rat(1, 24));
        // 5 vertices: the square pyramid (8 edges, 5!/8 labellings) and K5 minus an edge (9 edges, 5!/12)
        let labelled = |i: u32, j: u32| t.g3.coeff(i, j) * Rational::from_integer((1..=i).product::<u32>().into());
        assert_eq!(labelled(5, 8), int(15));
        assert_eq!(labelled(5, 9), int(10));
        assert_eq!(t.g3_rooted.coeff(2, 5), rat(1, 2));
    }
}
