//! Truncated bivariate power series with exact rational coefficients.
//!
//! A [`BiSeries`] is known exactly on the box `0..=trunc.x` × `0..=trunc.y`
//! and unknown outside of it. Every operation reports the box on which its
//! result is still exact: products keep the smaller box, divisions by a
//! monomial shrink it, multiplication by a monomial grows it. Nothing is
//! ever silently extrapolated.

mod json;
mod subst;
mod system;
mod transcendental;

pub use json::SeriesJson;
pub use system::{Expr, SeriesSystem, Solution};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("constant term must be {expected}, found {found}")]
    ConstantTermViolation { expected: String, found: Rational },
    #[error("term x^{i} y^{j} is not divisible by x^{di} y^{dj}")]
    DivisibilityError { i: u32, j: u32, di: u32, dj: u32 },
    #[error("substitution is not well-founded: {0}")]
    ValuationError(String),
    #[error("fixed-point iteration for `{unknown}` did not converge after {rounds} rounds")]
    NonContractive { unknown: String, rounds: usize },
    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),
    #[error("malformed series: {0}")]
    Malformed(String),
    #[error("unknown symbol `{0}` in series system")]
    UnknownSymbol(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Inclusive truncation bounds: coefficients of `x^i y^j` with `i <= x` and
/// `j <= y` are exact, everything else is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trunc {
    pub x: u32,
    pub y: u32,
}

impl Trunc {
    pub const fn new(x: u32, y: u32) -> Self {
        Trunc { x, y }
    }

    pub fn min(self, other: Trunc) -> Trunc {
        Trunc::new(self.x.min(other.x), self.y.min(other.y))
    }

    pub fn contains(self, i: u32, j: u32) -> bool {
        i <= self.x && j <= self.y
    }

    /// True when `self` is at least as large as `other` in both directions.
    pub fn covers(self, other: Trunc) -> bool {
        self.x >= other.x && self.y >= other.y
    }

    fn cells(self) -> usize {
        (self.x as usize + 1) * (self.y as usize + 1)
    }
}

impl fmt::Display for Trunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Selects one of the two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Sparse truncated bivariate series. Immutable once built; all operations
/// return new values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    trunc: Trunc,
    terms: BTreeMap<(u32, u32), Rational>,
}

/// A coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Difference {
    pub i: u32,
    pub j: u32,
    pub left: Rational,
    pub right: Rational,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[x^{} y^{}]: {} vs {}", self.i, self.j, self.left, self.right)
    }
}

impl BiSeries {
    pub fn zero(trunc: Trunc) -> Self {
        BiSeries { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: Trunc) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    pub fn constant(c: Rational, trunc: Trunc) -> Self {
        Self::monomial(0, 0, c, trunc)
    }

    pub fn monomial(i: u32, j: u32, c: Rational, trunc: Trunc) -> Self {
        let mut s = Self::zero(trunc);
        s.accumulate(i, j, c);
        s
    }

    /// The identity monomial `x` (or `y`).
    pub fn var(v: Var, trunc: Trunc) -> Self {
        match v {
            Var::X => Self::monomial(1, 0, Rational::one(), trunc),
            Var::Y => Self::monomial(0, 1, Rational::one(), trunc),
        }
    }

    pub fn from_terms<I>(terms: I, trunc: Trunc) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut s = Self::zero(trunc);
        for (i, j, c) in terms {
            s.accumulate(i, j, c);
        }
        s
    }

    fn accumulate(&mut self, i: u32, j: u32, c: Rational) {
        if !self.trunc.contains(i, j) || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    /// Nonzero terms in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent of `v` among nonzero terms; `None` for the zero series.
    pub fn valuation(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::X => i,
                Var::Y => j,
            })
            .min()
    }

    /// Restricts to a smaller box. Fails if `to` is not contained in the current box.
    pub fn truncate(&self, to: Trunc) -> Result<BiSeries> {
        if !self.trunc.covers(to) {
            return Err(SeriesError::TruncationExhausted(format!(
                "series known on {} but {} requested",
                self.trunc, to
            )));
        }
        Ok(self.restrict(to))
    }

    /// Restricts to the intersection of the current box and `to`.
    pub fn restrict(&self, to: Trunc) -> BiSeries {
        let trunc = self.trunc.min(to);
        BiSeries {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| trunc.contains(i, j))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> BiSeries {
        if c.is_zero() {
            return BiSeries::zero(self.trunc);
        }
        BiSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Exact multiplication by `x^i y^j`; the known box grows accordingly.
    pub fn shift(&self, i: u32, j: u32) -> BiSeries {
        BiSeries {
            trunc: Trunc::new(self.trunc.x + i, self.trunc.y + j),
            terms: self.terms.iter().map(|(&(a, b), c)| ((a + i, b + j), c.clone())).collect(),
        }
    }

    /// Exact division by `x^i y^j`. Every term must be divisible.
    pub fn divide_by_monomial(&self, i: u32, j: u32) -> Result<BiSeries> {
        if let Some((&(a, b), _)) = self.terms.iter().find(|(&(a, b), _)| a < i || b < j) {
            return Err(SeriesError::DivisibilityError { i: a, j: b, di: i, dj: j });
        }
        if self.trunc.x < i || self.trunc.y < j {
            return Err(SeriesError::TruncationExhausted(format!(
                "cannot divide a series known on {} by x^{i} y^{j}",
                self.trunc
            )));
        }
        Ok(BiSeries {
            trunc: Trunc::new(self.trunc.x - i, self.trunc.y - j),
            terms: self.terms.iter().map(|(&(a, b), c)| ((a - i, b - j), c.clone())).collect(),
        })
    }

    pub fn derivative(&self, v: Var) -> Result<BiSeries> {
        let trunc = match v {
            Var::X if self.trunc.x > 0 => Trunc::new(self.trunc.x - 1, self.trunc.y),
            Var::Y if self.trunc.y > 0 => Trunc::new(self.trunc.x, self.trunc.y - 1),
            _ => {
                return Err(SeriesError::TruncationExhausted(format!(
                    "cannot differentiate a series known on {}",
                    self.trunc
                )))
            }
        };
        let mut out = BiSeries::zero(trunc);
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.accumulate(i - 1, j, c * int(i as i64)),
                Var::Y if j > 0 => out.accumulate(i, j - 1, c * int(j as i64)),
                _ => {}
            }
        }
        Ok(out)
    }

    /// The rooted normalisation `(2/x^2) d/dy`.
    pub fn rooted_derivative(&self) -> Result<BiSeries> {
        self.derivative(Var::Y)?.divide_by_monomial(2, 0).map(|s| s.scale(&int(2)))
    }

    /// Applies an exponent map to every term. Terms mapped to `None` are dropped;
    /// the caller is responsible for choosing a `trunc` on which the image is exact.
    pub fn map_exponents<F>(&self, trunc: Trunc, mut f: F) -> BiSeries
    where
        F: FnMut(u32, u32) -> Option<(u32, u32)>,
    {
        let mut out = BiSeries::zero(trunc);
        for (&(i, j), c) in &self.terms {
            if let Some((a, b)) = f(i, j) {
                out.accumulate(a, b, c.clone());
            }
        }
        out
    }

    /// Replaces `y^(k*e)` by `y^e`. Fails if some `y` exponent is not a multiple of `k`.
    pub fn compress_y(&self, k: u32) -> Result<BiSeries> {
        if let Some((&(i, j), _)) = self.terms.iter().find(|(&(_, j), _)| j % k != 0) {
            return Err(SeriesError::DivisibilityError { i, j, di: 0, dj: k });
        }
        Ok(self.map_exponents(Trunc::new(self.trunc.x, self.trunc.y / k), |i, j| Some((i, j / k))))
    }

    /// First coefficient (lexicographic) where the two series differ on their common box.
    pub fn first_difference(&self, other: &BiSeries) -> Option<Difference> {
        let common = self.trunc.min(other.trunc);
        let mut keys: Vec<(u32, u32)> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|&&(i, j)| common.contains(i, j))
            .copied()
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().find_map(|(i, j)| {
            let (l, r) = (self.coeff(i, j), other.coeff(i, j));
            (l != r).then_some(Difference { i, j, left: l, right: r })
        })
    }

    /// Equality on the common box.
    pub fn agrees_with(&self, other: &BiSeries) -> bool {
        self.first_difference(other).is_none()
    }

    /// True when every coefficient is a nonnegative rational (used by sanity checks).
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn pow(&self, k: u32) -> BiSeries {
        let mut result = BiSeries::one(self.trunc);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O{}", self.trunc);
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "y")?,
                _ => write!(f, "y^{j}")?,
            }
        }
        write!(f, " + O{}", self.trunc)
    }
}

/// Dense scratch grid used by the recursive kernels.
struct Dense {
    trunc: Trunc,
    cells: Vec<Rational>,
}

impl Dense {
    fn zero(trunc: Trunc) -> Self {
        Dense { trunc, cells: vec![Rational::zero(); trunc.cells()] }
    }

    fn idx(&self, i: u32, j: u32) -> usize {
        i as usize * (self.trunc.y as usize + 1) + j as usize
    }

    fn get(&self, i: u32, j: u32) -> &Rational {
        &self.cells[self.idx(i, j)]
    }

    fn set(&mut self, i: u32, j: u32, c: Rational) {
        let k = self.idx(i, j);
        self.cells[k] = c;
    }

    fn into_series(self) -> BiSeries {
        let ny = self.trunc.y as usize + 1;
        let terms = self
            .cells
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (((k / ny) as u32, (k % ny) as u32), c))
            .collect();
        BiSeries { trunc: self.trunc, terms }
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;
    fn add(self, rhs: &BiSeries) -> BiSeries {
        let mut out = self.restrict(rhs.trunc);
        for (&(i, j), c) in &rhs.terms {
            out.accumulate(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;
    fn sub(self, rhs: &BiSeries) -> BiSeries {
        let mut out = self.restrict(rhs.trunc);
        for (&(i, j), c) in &rhs.terms {
            out.accumulate(i, j, -c);
        }
        out
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        BiSeries { trunc: self.trunc, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: &BiSeries) -> BiSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let mut acc = Dense::zero(trunc);
        for (&(i1, j1), c1) in &self.terms {
            if !trunc.contains(i1, j1) {
                continue;
            }
            for (&(i2, j2), c2) in &rhs.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                if i > trunc.x {
                    break;
                }
                if j <= trunc.y {
                    let k = acc.idx(i, j);
                    acc.cells[k] += c1 * c2;
                }
            }
        }
        acc.into_series()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BiSeries> for BiSeries {
            type Output = BiSeries;
            fn $m(self, rhs: BiSeries) -> BiSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BiSeries> for BiSeries {
            type Output = BiSeries;
            fn $m(self, rhs: &BiSeries) -> BiSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<BiSeries> for &BiSeries {
            type Output = BiSeries;
            fn $m(self, rhs: BiSeries) -> BiSeries {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiSeries {
    type Output = BiSeries;
    fn neg(self) -> BiSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: Trunc = Trunc::new(4, 4);

    fn x() -> BiSeries {
        BiSeries::var(Var::X, T)
    }

    fn y() -> BiSeries {
        BiSeries::var(Var::Y, T)
    }

    #[test]
    fn additive_identity_and_monomial_product() {
        assert_eq!(&x() + &BiSeries::zero(T), x());
        assert_eq!(&x() * &y(), BiSeries::monomial(1, 1, int(1), T));
    }

    #[test]
    fn difference_of_squares() {
        let one = BiSeries::one(T);
        let p = &(&one + &x()) * &(&one - &x());
        assert_eq!(p, &one - &BiSeries::monomial(2, 0, int(1), T));
    }

    #[test]
    fn truncation_is_eager() {
        let p = x().pow(5);
        assert!(p.is_zero());
        let a = BiSeries::monomial(3, 0, int(1), T);
        let b = BiSeries::monomial(2, 0, int(1), Trunc::new(8, 8));
        assert_eq!((&a * &b).trunc(), T);
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn derivative_examples() {
        let x2y = BiSeries::monomial(2, 1, int(1), T);
        let d = x2y.derivative(Var::X).unwrap();
        assert_eq!(d, BiSeries::monomial(1, 1, int(2), Trunc::new(3, 4)));
        let c = BiSeries::constant(int(7), T);
        assert!(c.derivative(Var::X).unwrap().is_zero());
    }

    #[test]
    fn rooted_derivative_of_tetrahedron_term() {
        let t = Trunc::new(6, 8);
        let k4 = BiSeries::monomial(4, 6, rat(1, 24), t);
        let r = k4.rooted_derivative().unwrap();
        assert_eq!(r.coeff(2, 5), rat(1, 2));
        assert_eq!(r.len(), 1);
        assert_eq!(r.trunc(), Trunc::new(4, 7));
    }

    #[test]
    fn rooted_derivative_requires_x_squared() {
        let s = BiSeries::monomial(1, 2, int(1), T);
        assert!(matches!(s.rooted_derivative(), Err(SeriesError::DivisibilityError { .. })));
    }

    #[test]
    fn monomial_division() {
        let x2y = BiSeries::monomial(2, 1, int(1), T);
        assert_eq!(x2y.divide_by_monomial(2, 0).unwrap(), BiSeries::monomial(0, 1, int(1), Trunc::new(2, 4)));
        let s = &BiSeries::monomial(3, 0, int(1), T) + &BiSeries::monomial(2, 1, int(1), T);
        let q = s.divide_by_monomial(2, 0).unwrap();
        assert_eq!(q, &BiSeries::var(Var::X, Trunc::new(2, 4)) + &BiSeries::var(Var::Y, Trunc::new(2, 4)));
        let err = (&x() + &y()).divide_by_monomial(1, 0).unwrap_err();
        assert_eq!(err, SeriesError::DivisibilityError { i: 0, j: 1, di: 1, dj: 0 });
    }

    #[test]
    fn shift_grows_the_box() {
        let s = BiSeries::one(Trunc::new(2, 2)).shift(1, 0);
        assert_eq!(s.trunc(), Trunc::new(3, 2));
        assert_eq!(s.coeff(1, 0), int(1));
    }

    #[test]
    fn first_difference_is_lexicographic_on_common_box() {
        let a = BiSeries::from_terms([(0, 1, int(1)), (1, 0, int(2))], T);
        let b = BiSeries::from_terms([(0, 1, int(1)), (1, 0, int(3)), (5, 5, int(1))], Trunc::new(6, 6));
        let d = a.first_difference(&b).unwrap();
        assert_eq!((d.i, d.j, d.left, d.right), (1, 0, int(2), int(3)));
        assert!(a.agrees_with(&a.restrict(Trunc::new(1, 1))));
    }

    #[test]
    fn compress_even_powers() {
        let s = BiSeries::from_terms([(0, 2, int(1)), (1, 4, int(3))], Trunc::new(2, 5));
        let c = s.compress_y(2).unwrap();
        assert_eq!(c.trunc(), Trunc::new(2, 2));
        assert_eq!(c.coeff(1, 2), int(3));
        assert!(BiSeries::var(Var::Y, T).compress_y(2).is_err());
    }
}
