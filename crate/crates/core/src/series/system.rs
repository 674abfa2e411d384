//! Systems of series equations `U_k = F_k(U_1, ..., U_n)` solved by sweeping
//! fixed-point iteration from zero.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::{BiSeries, Rational, Result, SeriesError, Trunc, Var};

/// Expression tree over unknowns, known series and the variables.
#[derive(Clone, Debug)]
pub enum Expr {
    Unknown(usize),
    Known(Arc<BiSeries>),
    Var(Var),
    Const(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Scale(Rational, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Inv(Box<Expr>),
    ExpAtLeast(u32, Box<Expr>),
    LogaAtLeast(u32, Box<Expr>),
    Derivative(Var, Box<Expr>),
    /// Exact multiplication by `x^i y^j`.
    Shift(u32, u32, Box<Expr>),
    /// Exact division by `x^i y^j`.
    DivMonomial(u32, u32, Box<Expr>),
    /// `outer(px, py)`.
    Substitute { outer: Box<Expr>, px: Box<Expr>, py: Box<Expr> },
}

impl Expr {
    pub fn known(s: BiSeries) -> Expr {
        Expr::Known(Arc::new(s))
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::Var(Var::Y)
    }

    pub fn konst(c: Rational) -> Expr {
        Expr::Const(c)
    }

    pub fn scale(self, c: Rational) -> Expr {
        Expr::Scale(c, Box::new(self))
    }

    pub fn pow(self, k: u32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn log(self) -> Expr {
        Expr::Log(Box::new(self))
    }

    pub fn inv(self) -> Expr {
        Expr::Inv(Box::new(self))
    }

    pub fn exp_at_least(self, k: u32) -> Expr {
        Expr::ExpAtLeast(k, Box::new(self))
    }

    pub fn loga_at_least(self, k: u32) -> Expr {
        Expr::LogaAtLeast(k, Box::new(self))
    }

    pub fn derivative(self, v: Var) -> Expr {
        Expr::Derivative(v, Box::new(self))
    }

    pub fn shift(self, i: u32, j: u32) -> Expr {
        Expr::Shift(i, j, Box::new(self))
    }

    pub fn div_monomial(self, i: u32, j: u32) -> Expr {
        Expr::DivMonomial(i, j, Box::new(self))
    }

    pub fn substitute(self, px: Expr, py: Expr) -> Expr {
        Expr::Substitute { outer: Box::new(self), px: Box::new(px), py: Box::new(py) }
    }

    /// Evaluates with the unknowns bound to `values`; variables and constants
    /// are materialised on the box `target`.
    pub fn eval(&self, values: &[BiSeries], target: Trunc) -> Result<BiSeries> {
        let ev = |e: &Expr| e.eval(values, target);
        Ok(match self {
            Expr::Unknown(i) => values
                .get(*i)
                .cloned()
                .ok_or_else(|| SeriesError::UnknownSymbol(format!("#{i}")))?,
            Expr::Known(s) => (**s).clone(),
            Expr::Var(v) => BiSeries::var(*v, target),
            Expr::Const(c) => BiSeries::constant(c.clone(), target),
            Expr::Add(a, b) => ev(a)? + ev(b)?,
            Expr::Sub(a, b) => ev(a)? - ev(b)?,
            Expr::Neg(a) => -ev(a)?,
            Expr::Mul(a, b) => ev(a)? * ev(b)?,
            Expr::Scale(c, a) => ev(a)?.scale(c),
            Expr::Pow(a, k) => ev(a)?.pow(*k),
            Expr::Exp(a) => ev(a)?.exp()?,
            Expr::Log(a) => ev(a)?.log()?,
            Expr::Inv(a) => ev(a)?.inv()?,
            Expr::ExpAtLeast(k, a) => ev(a)?.exp_at_least(*k)?,
            Expr::LogaAtLeast(k, a) => ev(a)?.loga_at_least(*k)?,
            Expr::Derivative(v, a) => ev(a)?.derivative(*v)?,
            Expr::Shift(i, j, a) => ev(a)?.shift(*i, *j),
            Expr::DivMonomial(i, j, a) => ev(a)?.divide_by_monomial(*i, *j)?,
            Expr::Substitute { outer, px, py } => ev(outer)?.substitute(&ev(px)?, &ev(py)?)?,
        })
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $variant:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                Expr::$variant(Box::new(self.clone()), Box::new(rhs.clone()))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// A named system of equations, one per unknown.
#[derive(Clone, Debug, Default)]
pub struct SeriesSystem {
    names: Vec<String>,
    equations: Vec<Option<Expr>>,
    initial: Vec<Option<BiSeries>>,
}

/// Solved unknowns keyed by name.
#[derive(Clone, Debug, Default)]
pub struct Solution {
    values: BTreeMap<String, BiSeries>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Result<&BiSeries> {
        self.values.get(name).ok_or_else(|| SeriesError::UnknownSymbol(name.to_string()))
    }

    pub fn into_map(self) -> BTreeMap<String, BiSeries> {
        self.values
    }
}

impl SeriesSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an unknown and returns the expression referring to it.
    pub fn unknown(&mut self, name: &str) -> Expr {
        self.names.push(name.to_string());
        self.equations.push(None);
        self.initial.push(None);
        Expr::Unknown(self.names.len() - 1)
    }

    fn index(&self, u: &Expr) -> Result<usize> {
        match u {
            Expr::Unknown(i) if *i < self.names.len() => Ok(*i),
            _ => Err(SeriesError::UnknownSymbol(format!("{u:?}"))),
        }
    }

    pub fn define(&mut self, unknown: &Expr, rhs: Expr) -> Result<()> {
        let i = self.index(unknown)?;
        self.equations[i] = Some(rhs);
        Ok(())
    }

    /// Starting value for an unknown (zero otherwise).
    pub fn set_initial(&mut self, unknown: &Expr, value: BiSeries) -> Result<()> {
        let i = self.index(unknown)?;
        self.initial[i] = Some(value);
        Ok(())
    }

    /// Iterates all equations in declaration order until a sweep changes no
    /// coefficient inside `target`.
    ///
    /// Each sweep must eventually settle all coefficients of some total
    /// degree: if the lowest degree at which anything changes fails to rise
    /// within `n + 1` sweeps, the system is reported as non-contractive.
    pub fn solve(&self, target: Trunc) -> Result<Solution> {
        let n = self.names.len();
        let mut values: Vec<BiSeries> = self
            .initial
            .iter()
            .map(|v| v.as_ref().map_or_else(|| BiSeries::zero(target), |s| s.restrict(target)))
            .collect();
        let budget = (target.x as usize + target.y as usize + 2) * (n + 1);
        let mut history: Vec<u32> = Vec::new();
        for round in 0..budget {
            let mut lowest: Option<(u32, usize)> = None;
            for i in 0..n {
                let eq = self.equations[i]
                    .as_ref()
                    .ok_or_else(|| SeriesError::UnknownSymbol(format!("{} has no equation", self.names[i])))?;
                let new = eq.eval(&values, target)?;
                if !new.trunc().covers(target) {
                    return Err(SeriesError::TruncationExhausted(format!(
                        "equation for `{}` is only exact on {} but {} is required",
                        self.names[i],
                        new.trunc(),
                        target
                    )));
                }
                let new = new.restrict(target);
                if let Some(d) = new.first_difference_degree(&values[i]) {
                    if lowest.is_none_or(|(l, _)| d < l) {
                        lowest = Some((d, i));
                    }
                }
                values[i] = new;
            }
            match lowest {
                None => {
                    let values = self.names.iter().cloned().zip(values).collect();
                    return Ok(Solution { values });
                }
                Some((d, i)) => {
                    if round > n && history[round - n - 1] >= d {
                        return Err(SeriesError::NonContractive { unknown: self.names[i].clone(), rounds: round + 1 });
                    }
                    history.push(d);
                }
            }
        }
        Err(SeriesError::NonContractive {
            unknown: self.names.first().cloned().unwrap_or_default(),
            rounds: budget,
        })
    }
}

impl BiSeries {
    /// Lowest total degree at which the two series (on the same box) differ.
    fn first_difference_degree(&self, other: &BiSeries) -> Option<u32> {
        let mut best: Option<u32> = None;
        for (i, j, c) in self.terms() {
            if other.coeff(i, j) != *c {
                best = Some(best.map_or(i + j, |b| b.min(i + j)));
            }
        }
        for (i, j, c) in other.terms() {
            if self.coeff(i, j).is_zero() && !c.is_zero() {
                best = Some(best.map_or(i + j, |b| b.min(i + j)));
            }
        }
        best
    }
}
