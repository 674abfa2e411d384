//! Series of planar maps and, through the unique embedding of 3-connected
//! planar graphs, the terminal series of the planar graph family.
//!
//! Every stage uses two variables. Vertex-like quantities use `x`; the
//! second variable is `s` (edges of general maps, squared per edge), `t`
//! (the same for 2-connected maps), `y` (edges of networks) or `w` (edges of
//! 3-connected maps). All series are stored as [`BiSeries`] with the second
//! variable in the `Y` slot.
//!
//! Map counts use the half-edge labelled convention: vertices are unlabelled,
//! the `2m` half-edges carry distinct labels, and a series coefficient is the
//! number of such structures divided by `(2m)!`. In this normalisation the
//! rooted loop and rooted link give `[s²]→M = x + 1`, and the vertex-pointed
//! loop contributes `1/2` to `[s²]M′`.
//!
//! Most quantities are computed twice, by independent formulas; the
//! comparisons are collected in a [`Diagnostics`] report.

mod general;
mod three_connected;

pub use general::{
    beta_to_eta, change_of_variable_checks, eta_series, eta_to_beta, mobile_series, motzkin_series,
    pointed_two_connected_maps, rooted_maps, solve_beta, Beta, Eta, Mobiles, Motzkin, PointedTwoConnected,
};
pub use three_connected::{
    gamma_checks, gamma_series, map_network_series, planar_terminals, pointed_three_connected_maps,
    three_connected_maps, Gamma, MapNetworks, PointedThreeConnected, ThreeConnectedMaps,
};

use serde::Serialize;
use thiserror::Error;

use crate::grammar::GrammarError;
use crate::series::{BiSeries, Rational, SeriesError, Trunc, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapsError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("the two computations of {check} disagree at {at}")]
    RouteMismatch { check: String, at: String },
}

pub type Result<T> = std::result::Result<T, MapsError>;

/// Outcome of comparing two computations of the same series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteCheck {
    pub name: String,
    pub passed: bool,
    /// Box `[x, second variable]` on which the two series were compared.
    pub compared_on: [u32; 2],
    pub first_difference: Option<String>,
}

/// Report of every double computation performed by a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub convention: String,
    pub checks: Vec<RouteCheck>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Diagnostics {
            convention: "maps: vertices unlabelled, half-edges labelled, coefficient = count / (2m)!; \
                         pinned by [s^2] rooted maps = x + 1 and [s^2] vertex-pointed maps = x + 1/2"
                .into(),
            checks: Vec::new(),
        }
    }

    /// Compares `a` and `b` on their common box and records the result.
    pub fn compare(&mut self, name: &str, a: &BiSeries, b: &BiSeries) -> bool {
        let common = a.trunc().min(b.trunc());
        let diff = a.first_difference(b);
        let passed = diff.is_none();
        self.checks.push(RouteCheck {
            name: name.to_string(),
            passed,
            compared_on: [common.x, common.y],
            first_difference: diff.map(|d| d.to_string()),
        });
        passed
    }

    /// Records a check that is not a series comparison.
    pub fn assert(&mut self, name: &str, passed: bool, detail: impl FnOnce() -> String) -> bool {
        self.checks.push(RouteCheck {
            name: name.to_string(),
            passed,
            compared_on: [0, 0],
            first_difference: (!passed).then(detail),
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RouteCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Diagnostics) {
        self.checks.extend(other.checks);
    }

    /// Turns the first failed check into an error.
    pub fn ensure(&self) -> Result<()> {
        match self.failures().next() {
            None => Ok(()),
            Some(c) => Err(MapsError::RouteMismatch {
                check: c.name.clone(),
                at: c.first_difference.clone().unwrap_or_default(),
            }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagnostics serialise")
    }
}

/// Restricts `s` to `target`, failing if it is not known there.
fn require(s: &BiSeries, target: Trunc, what: &str) -> Result<BiSeries> {
    if !s.trunc().covers(target) {
        return Err(SeriesError::TruncationExhausted(format!(
            "{what} is only exact on {} but {target} is required",
            s.trunc()
        ))
        .into());
    }
    Ok(s.restrict(target))
}

fn one(t: Trunc) -> BiSeries {
    BiSeries::one(t)
}

fn konst(c: Rational, t: Trunc) -> BiSeries {
    BiSeries::constant(c, t)
}

fn mono(i: u32, j: u32, t: Trunc) -> BiSeries {
    BiSeries::monomial(i, j, crate::series::int(1), t)
}

fn xvar(t: Trunc) -> BiSeries {
    BiSeries::var(Var::X, t)
}

fn yvar(t: Trunc) -> BiSeries {
    BiSeries::var(Var::Y, t)
}

/// `1 / (1 - z)` for `z` without constant term.
fn geom(z: &BiSeries) -> Result<BiSeries> {
    Ok((&one(z.trunc()) - z).inv()?)
}

/// `a / b` where `b` has constant term 1 (or any nonzero constant).
fn ratio(a: &BiSeries, b: &BiSeries) -> Result<BiSeries> {
    Ok(a * &b.inv()?)
}

/// Whether every exponent of the second variable is even.
fn is_even(s: &BiSeries) -> bool {
    s.terms().all(|(_, j, _)| j % 2 == 0)
}

/// The monomial map `x^a w^b -> x^(b-a) w^b`, i.e. `f(1/x, xw)`, on `target`.
/// Requires `a <= b` for every term; exact on `target` when the source box
/// reaches `x`-degree `target.y`.
fn flip(s: &BiSeries, target: Trunc) -> Result<BiSeries> {
    if let Some((i, j, _)) = s.terms().find(|&(i, j, _)| i > j) {
        return Err(SeriesError::ValuationError(format!("term x^{i} w^{j} has no image under x -> 1/x, w -> xw"))
            .into());
    }
    let exact = Trunc::new(target.x, target.y.min(s.trunc().y));
    if s.trunc().x < exact.y {
        return Err(SeriesError::TruncationExhausted(format!(
            "flip onto {exact} needs x-degree {} but the source has {}",
            exact.y,
            s.trunc().x
        ))
        .into());
    }
    Ok(s.map_exponents(exact, |i, j| Some((j - i, j))))
}

/// Runs every stage so that the map series are exact up to `x^order.x` and
/// second-variable degree `order.y` (the `s`/`t` degree for general and
/// 2-connected maps, the edge degree for networks and 3-connected maps),
/// and returns the full diagnostics report.
pub fn double_route_report(order: Trunc) -> Result<Diagnostics> {
    let mut diag = Diagnostics::new();
    let (nx, ns) = (order.x, order.y);
    let mobiles = mobile_series(order, &mut diag)?;
    let beta = solve_beta(Trunc::new(nx + 1, ns + 4), false)?;
    let m_rooted = rooted_maps(&beta, &mut diag)?;
    // networks need the 2-connected maps to t-degree 2(ns + 1)
    let eta = eta_series(Trunc::new(nx + 1, 2 * ns + 2))?;
    change_of_variable_checks(&beta, &m_rooted, &eta, &mut diag)?;
    let pointed = pointed_two_connected_maps(&beta, &mobiles.m_pointed, &m_rooted, &eta, &mut diag)?;
    let nets = map_network_series(&eta, &mut diag)?;
    let gamma = gamma_series(Trunc::new(nx + 2, ns + 2))?;
    gamma_checks(&gamma, &nets, &mut diag)?;
    pointed_three_connected_maps(&gamma, &nets, &pointed.l_pointed, &mut diag)?;
    planar_terminals(order, &mut diag)?;
    Ok(diag)
}

/// The planar graph family through the grammar, on `trunc` (vertices, edges).
pub fn planar_family(trunc: Trunc) -> Result<(crate::grammar::GrammarOutput, Diagnostics)> {
    let mut diag = Diagnostics::new();
    let terminals = planar_terminals(trunc, &mut diag)?;
    Ok((crate::grammar::run(&terminals, trunc)?, diag))
}
