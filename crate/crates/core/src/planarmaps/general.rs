//! General maps, vertex-pointed maps via mobiles, and 2-connected maps.

use super::{geom, is_even, konst, one, ratio, require, xvar, yvar, Diagnostics, Result};
use crate::series::{int, rat, BiSeries, Expr, SeriesError, SeriesSystem, Trunc};

/// Motzkin paths in `(t, u)`: `t` marks a level step, `u` an up-down pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Motzkin {
    /// Excursions: `E = 1 + tE + uE²`.
    pub e: BiSeries,
    /// Bridges: `B = 1 + (t + 2uE)B`.
    pub b: BiSeries,
    /// Paths ending one level up: `B^(+1) = E B`.
    pub b_plus1: BiSeries,
    /// Bridges weighted by the inverse number of returns: `log E`.
    pub b_hat: BiSeries,
}

pub fn motzkin_series(trunc: Trunc) -> Result<Motzkin> {
    let mut sys = SeriesSystem::new();
    let e = sys.unknown("E");
    let b = sys.unknown("B");
    sys.define(&e, Expr::konst(int(1)) + Expr::x() * e.clone() + Expr::y() * e.clone().pow(2))?;
    sys.define(&b, Expr::konst(int(1)) + (Expr::x() + Expr::y() * e.clone().scale(int(2))) * b.clone())?;
    let sol = sys.solve(trunc)?;
    let e = sol.get("E")?.clone();
    let b = sol.get("B")?.clone();
    let b_plus1 = &e * &b;
    let b_hat = e.log()?;
    Ok(Motzkin { e, b, b_plus1, b_hat })
}

/// Solution of the β system.
#[derive(Clone, Debug, PartialEq)]
pub struct Beta {
    pub b1: BiSeries,
    pub b2: BiSeries,
}

/// Solves `β₁ = x s² + β₁² + 2β₁β₂`, `β₂ = y s² + β₂² + 2β₁β₂`.
///
/// With `with_y = false` this is the `y = 1` form in `(x, s)`. With
/// `with_y = true` the series are returned in `(x, y)`: every `s²` comes with
/// exactly one `x` or `y`, so the `s`-degree of a term is twice its total
/// degree and `s` can be left implicit.
pub fn solve_beta(trunc: Trunc, with_y: bool) -> Result<Beta> {
    let mut sys = SeriesSystem::new();
    let b1 = sys.unknown("beta1");
    let b2 = sys.unknown("beta2");
    let (m1, m2) = if with_y {
        (Expr::x(), Expr::y())
    } else {
        (Expr::x() * Expr::y().pow(2), Expr::y().pow(2))
    };
    let cross = (b1.clone() * b2.clone()).scale(int(2));
    sys.define(&b1, m1 + b1.clone().pow(2) + cross.clone())?;
    sys.define(&b2, m2 + b2.clone().pow(2) + cross)?;
    let sol = sys.solve(trunc)?;
    Ok(Beta { b1: sol.get("beta1")?.clone(), b2: sol.get("beta2")?.clone() })
}

/// Mobile series in `(x, s)` at `y = 1`, computed from the Motzkin bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobiles {
    pub l_circ: BiSeries,
    pub l_tri: BiSeries,
    pub u: BiSeries,
    pub t_bullet: BiSeries,
    pub t_circ: BiSeries,
    pub t_black_black: BiSeries,
    pub t_black_white: BiSeries,
    /// `T = T_• + T_∘ − T_{•−•} − T_{•−∘}`.
    pub t: BiSeries,
    /// Vertex-pointed maps from the closed β-form, including its `+1/2`.
    pub m_pointed: BiSeries,
}

/// Computes the mobile series on `trunc` both through the Motzkin bundle and
/// through the closed β-forms, recording the comparisons in `diag`.
pub fn mobile_series(trunc: Trunc, diag: &mut Diagnostics) -> Result<Mobiles> {
    let wide = Trunc::new(trunc.x + 1, trunc.y + 2);
    let beta = solve_beta(wide, false)?;
    let mz = motzkin_series(Trunc::new(wide.y / 2 + 2, wide.y / 2 + 2))?;

    let mut sys = SeriesSystem::new();
    let l_circ = sys.unknown("L_circ");
    let l_tri = sys.unknown("L_tri");
    let u = sys.unknown("u");
    let s2 = Expr::y().pow(2);
    let at = |f: &BiSeries| Expr::known(f.clone()).substitute(l_tri.clone(), u.clone());
    sys.define(&l_circ, s2.clone() * at(&mz.b_plus1))?;
    sys.define(&l_tri, s2.clone() * at(&mz.b))?;
    sys.define(&u, s2 * Expr::x() * (Expr::konst(int(1)) - l_circ.clone()).inv())?;
    let sol = sys.solve(wide)?;
    let lc = sol.get("L_circ")?.clone();
    let lt = sol.get("L_tri")?.clone();
    let uu = sol.get("u")?.clone();

    // route through the Motzkin bundle
    let e_at = mz.e.substitute(&lt, &uu)?;
    let ue = &uu * &e_at;
    let x = xvar(wide);
    let half = rat(1, 2);
    let t_bullet_m = mz.b_hat.substitute(&lt, &uu)?;
    let t_circ_m = &x * &(&one(wide) - &lc).log()?.scale(&int(-1));
    let t_bb_m = (&lt * &lt).divide_by_monomial(0, 2)?.scale(&half);
    let t_bw_m = (&ue * &lt).divide_by_monomial(0, 2)?;

    // closed β-forms
    let (b1, b2) = (&beta.b1, &beta.b2);
    let one_minus = &(&one(wide) - b1) - b2;
    let t_bullet_b = one_minus.log()?.scale(&int(-1));
    let inner = &b1.divide_by_monomial(1, 2)? * &one_minus;
    let t_circ_b = &x * &inner.log()?;
    let t_bb_b = (b2 * b2).divide_by_monomial(0, 2)?.scale(&half);
    let t_bw_b = (b1 * b2).divide_by_monomial(0, 2)?;
    let m_pointed = &(&(&t_bullet_b + &t_circ_b) - &b2.divide_by_monomial(0, 2)?.scale(&half)) + &konst(half, wide);

    diag.compare("mobiles: L_tri = beta2", &lt, b2);
    diag.compare("mobiles: u E(L_tri, u) = beta1", &ue, b1);
    diag.compare("mobiles: 1/(1 - L_circ) = beta1 (1 - beta1 - beta2)/(x s^2)", &geom(&lc)?, &inner);
    diag.compare("mobiles: T_bullet", &t_bullet_m, &t_bullet_b);
    diag.compare("mobiles: T_circ", &t_circ_m, &t_circ_b);
    diag.compare("mobiles: T_black_black", &t_bb_m, &t_bb_b);
    diag.compare("mobiles: T_black_white", &t_bw_m, &t_bw_b);
    let t = &(&(&t_bullet_m + &t_circ_m) - &t_bb_m) - &t_bw_m;
    diag.compare("vertex-pointed maps: T(x, 1, s) = closed form", &t, &m_pointed);
    diag.assert("vertex-pointed maps: even in s", is_even(&m_pointed), || "odd power of s".into());

    let r = |s: &BiSeries, what: &str| require(s, trunc, what);
    Ok(Mobiles {
        l_circ: r(&lc, "L_circ")?,
        l_tri: r(&lt, "L_tri")?,
        u: r(&uu, "u")?,
        t_bullet: r(&t_bullet_m, "T_bullet")?,
        t_circ: r(&t_circ_m, "T_circ")?,
        t_black_black: r(&t_bb_m, "T_black_black")?,
        t_black_white: r(&t_bw_m, "T_black_white")?,
        t: r(&t, "T")?,
        m_pointed: r(&m_pointed, "M'")?,
    })
}

/// Rooted maps `→M(x, s)` on the box one `x`-order and four `s`-orders below
/// that of `beta`, computed by two formulas that must agree.
pub fn rooted_maps(beta: &Beta, diag: &mut Diagnostics) -> Result<BiSeries> {
    let (b1, b2) = (&beta.b1, &beta.b2);
    let t = b1.trunc().min(b2.trunc());
    let o = one(t);
    let core = &(&o - &b1.scale(&int(2))) - &b2.scale(&int(2));
    let first = &(&(b1 * b2) * &core).divide_by_monomial(1, 4)? - &one(t);
    let second = rooted_from_beta(b1, b2)?;
    if !diag.compare("rooted maps: two formulas", &first, &second) {
        diag.ensure()?;
    }
    diag.assert("rooted maps: even in s", is_even(&first), || "odd power of s".into());
    Ok(first)
}

/// `(1−2β₁−2β₂)/((1−β₁−2β₂)(1−β₂−2β₁)) − 1`, valid for any pair of series
/// without constant term.
fn rooted_from_beta(b1: &BiSeries, b2: &BiSeries) -> Result<BiSeries> {
    let t = b1.trunc().min(b2.trunc());
    let o = one(t);
    let two = int(2);
    let num = &(&o - &b1.scale(&two)) - &b2.scale(&two);
    let d1 = &(&o - b1) - &b2.scale(&two);
    let d2 = &(&o - b2) - &b1.scale(&two);
    Ok(&ratio(&num, &(&d1 * &d2))? - &o)
}

/// Solution of the η system in `(x, t)` and rooted 2-connected maps.
#[derive(Clone, Debug, PartialEq)]
pub struct Eta {
    pub eta1: BiSeries,
    pub eta2: BiSeries,
    /// `→L = η₁ + η₂ − 3η₁η₂`.
    pub l_rooted: BiSeries,
}

pub fn eta_series(trunc: Trunc) -> Result<Eta> {
    let mut sys = SeriesSystem::new();
    let e1 = sys.unknown("eta1");
    let e2 = sys.unknown("eta2");
    let t2 = Expr::y().pow(2);
    let one = || Expr::konst(int(1));
    sys.define(&e1, Expr::x() * t2.clone() * (one() - e2.clone()).inv().pow(2))?;
    sys.define(&e2, t2 * (one() - e1.clone()).inv().pow(2))?;
    let sol = sys.solve(trunc)?;
    let eta1 = sol.get("eta1")?.clone();
    let eta2 = sol.get("eta2")?.clone();
    let l_rooted = l_rooted_from(&eta1, &eta2);
    Ok(Eta { eta1, eta2, l_rooted })
}

fn l_rooted_from(e1: &BiSeries, e2: &BiSeries) -> BiSeries {
    &(e1 + e2) - &(e1 * e2).scale(&int(3))
}

/// `η₁ = β₁/(1−β₁−2β₂)`, `η₂ = β₂/(1−β₂−2β₁)`.
pub fn beta_to_eta(b1: &BiSeries, b2: &BiSeries) -> Result<(BiSeries, BiSeries)> {
    let t = b1.trunc().min(b2.trunc());
    let two = int(2);
    let d1 = &(&one(t) - b1) - &b2.scale(&two);
    let d2 = &(&one(t) - b2) - &b1.scale(&two);
    Ok((ratio(b1, &d1)?, ratio(b2, &d2)?))
}

/// `β₁ = η₁(1−η₂)/(1+η₁+η₂−3η₁η₂)` and symmetrically.
pub fn eta_to_beta(e1: &BiSeries, e2: &BiSeries) -> Result<(BiSeries, BiSeries)> {
    let t = e1.trunc().min(e2.trunc());
    let o = one(t);
    let den = (&o + &l_rooted_from(e1, e2)).inv()?;
    Ok((&(e1 * &(&o - e2)) * &den, &(e2 * &(&o - e1)) * &den))
}

/// Cross-checks between the β and η systems, given `→M` and the η bundle.
///
/// The change of variable `t = s(1 + →M)` is only ever applied forwards.
pub fn change_of_variable_checks(beta: &Beta, m_rooted: &BiSeries, eta: &Eta, diag: &mut Diagnostics) -> Result<()> {
    let (e1, e2) = beta_to_eta(&beta.b1, &beta.b2)?;
    let (bb1, bb2) = eta_to_beta(&e1, &e2)?;
    diag.compare("beta -> eta -> beta: beta1", &bb1, &beta.b1);
    diag.compare("beta -> eta -> beta: beta2", &bb2, &beta.b2);
    let (f1, f2) = eta_to_beta(&eta.eta1, &eta.eta2)?;
    let (g1, g2) = beta_to_eta(&f1, &f2)?;
    diag.compare("eta -> beta -> eta: eta1", &g1, &eta.eta1);
    diag.compare("eta -> beta -> eta: eta2", &g2, &eta.eta2);

    let t = m_rooted.trunc();
    let ts = &yvar(t) * &(&one(t) + m_rooted);
    let x = xvar(t);
    diag.compare("eta(x, s(1 + rooted maps)) = eta1 from beta", &eta.eta1.substitute(&x, &ts)?, &e1);
    diag.compare("eta(x, s(1 + rooted maps)) = eta2 from beta", &eta.eta2.substitute(&x, &ts)?, &e2);

    diag.compare("rooted maps with beta replaced by eta = rooted 2-connected maps", &rooted_from_beta(&f1, &f2)?, &eta.l_rooted);
    Ok(())
}

/// Vertex-pointed maps split by the block of the pointed vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedTwoConnected {
    /// `M′_f = log(1 + →M)`.
    pub mp_f: BiSeries,
    /// `M′_Bf = →M`.
    pub mp_bf: BiSeries,
    /// `M′_B = M′ − M′_f + M′_Bf`.
    pub mp_b: BiSeries,
    /// Vertex-pointed 2-connected maps `L′(x, t)`.
    pub l_pointed: BiSeries,
}

/// The closed form of `M′_B` as a function of β₁, β₂ (and `x`).
fn mp_b_closed(b1: &BiSeries, b2: &BiSeries) -> Result<BiSeries> {
    let t = b1.trunc().min(b2.trunc());
    let o = one(t);
    let two = int(2);
    let d12 = &(&o - b1) - &b2.scale(&two);
    let d21 = &(&o - b2) - &b1.scale(&two);
    let c = &(&o - &b1.scale(&two)) - &b2.scale(&two);
    let e = &(&o - b1) - b2;
    let first = ratio(&(&d12 * &d21), &(&c * &e))?.log()?;
    let second = &xvar(t) * &ratio(&e, &d12)?.log()?;
    let third = ratio(&(&(&o - &b1.scale(&int(3))) - &b2.scale(&two)), &(&d12 * &d21).scale(&two))?;
    Ok(&(&(&first + &second) + &third) - &konst(rat(1, 2), t))
}

/// `L′(x,t) = −log(1−η₁η₂) + x log((1−η₁η₂)/(1−η₂)) + η₁+η₂−3η₁η₂ − (2η₁+η₂−3η₁η₂)/(2(1−η₁))`.
pub(super) fn l_pointed_closed(e1: &BiSeries, e2: &BiSeries) -> Result<BiSeries> {
    let t = e1.trunc().min(e2.trunc());
    let o = one(t);
    let p = e1 * e2;
    let q = &o - &p;
    let first = q.log()?.scale(&int(-1));
    let second = &xvar(t) * &ratio(&q, &(&o - e2))?.log()?;
    let third = l_rooted_from(e1, e2);
    let num = &(&e1.scale(&int(2)) + e2) - &p.scale(&int(3));
    let fourth = ratio(&num, &(&o - e1).scale(&int(2)))?;
    Ok(&(&(&first + &second) + &third) - &fourth)
}

/// Splits the vertex-pointed maps `m_pointed` and derives `L′` by the β ↦ η
/// substitution, checking both against closed forms.
pub fn pointed_two_connected_maps(
    beta: &Beta,
    m_pointed: &BiSeries,
    m_rooted: &BiSeries,
    eta: &Eta,
    diag: &mut Diagnostics,
) -> Result<PointedTwoConnected> {
    let t = m_pointed.trunc().min(m_rooted.trunc());
    let mr = m_rooted.restrict(t);
    let mp_f = (&one(t) + &mr).log()?;
    let mp_bf = mr.clone();
    let mp_b = &(&m_pointed.restrict(t) - &mp_f) + &mp_bf;
    diag.compare("pointed 2-connected-root maps: pipeline = closed form", &mp_b, &mp_b_closed(&beta.b1, &beta.b2)?);

    let (f1, f2) = eta_to_beta(&eta.eta1, &eta.eta2)?;
    let via_beta = mp_b_closed(&f1, &f2)?;
    let l_pointed = l_pointed_closed(&eta.eta1, &eta.eta2)?;
    diag.compare("pointed 2-connected maps: substitution = closed form", &via_beta, &l_pointed);
    if !l_pointed.constant_term().eq(&int(0)) {
        return Err(SeriesError::ConstantTermViolation { expected: "0".into(), found: l_pointed.constant_term() }
            .into());
    }
    Ok(PointedTwoConnected { mp_f, mp_bf, mp_b, l_pointed })
}
