//! Exponential, logarithm and reciprocal via the total-degree Euler operator.
//!
//! With `θ = x∂x + y∂y`, `θ(x^i y^j) = (i+j) x^i y^j`, and the identities
//! `θE = θf·E` (for `E = exp f`) and `θg = θL·g` (for `L = log g`) yield
//! recurrences in which each coefficient depends only on coefficients that
//! are strictly smaller in the product order.

use num_traits::{One, Zero};

use super::{int, BiSeries, Dense, Rational, Result, SeriesError};

impl BiSeries {
    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<BiSeries> {
        self.require_constant(&Rational::zero(), "0")?;
        let trunc = self.trunc;
        let f: Vec<(u32, u32, Rational)> =
            self.terms().map(|(i, j, c)| (i, j, c * int((i + j) as i64))).collect();
        let mut e = Dense::zero(trunc);
        e.set(0, 0, Rational::one());
        for i in 0..=trunc.x {
            for j in 0..=trunc.y {
                if i == 0 && j == 0 {
                    continue;
                }
                let mut acc = Rational::zero();
                for (a, b, kc) in &f {
                    if *a > i {
                        break;
                    }
                    if *b <= j {
                        let prev = e.get(i - a, j - b);
                        if !prev.is_zero() {
                            acc += kc * prev;
                        }
                    }
                }
                if !acc.is_zero() {
                    e.set(i, j, acc / int((i + j) as i64));
                }
            }
        }
        Ok(e.into_series())
    }

    /// `log(self)`; the constant term must be 1.
    pub fn log(&self) -> Result<BiSeries> {
        self.require_constant(&Rational::one(), "1")?;
        let trunc = self.trunc;
        let g: Vec<(u32, u32, &Rational)> = self.terms().filter(|&(i, j, _)| i + j > 0).collect();
        let mut l = Dense::zero(trunc);
        for i in 0..=trunc.x {
            for j in 0..=trunc.y {
                if i == 0 && j == 0 {
                    continue;
                }
                let d = (i + j) as i64;
                let mut acc = Rational::zero();
                for &(a, b, c) in &g {
                    if a > i {
                        break;
                    }
                    if b > j || (a == i && b == j) {
                        continue;
                    }
                    let prev = l.get(i - a, j - b);
                    if !prev.is_zero() {
                        acc += c * prev * int(d - (a + b) as i64);
                    }
                }
                let v = self.coeff(i, j) - acc / int(d);
                if !v.is_zero() {
                    l.set(i, j, v);
                }
            }
        }
        Ok(l.into_series())
    }

    /// `1/self`; the constant term must be nonzero.
    pub fn inv(&self) -> Result<BiSeries> {
        let g0 = self.constant_term();
        if g0.is_zero() {
            return Err(SeriesError::ConstantTermViolation {
                expected: "nonzero".into(),
                found: g0,
            });
        }
        let trunc = self.trunc;
        let inv0 = Rational::one() / &g0;
        let g: Vec<(u32, u32, &Rational)> = self.terms().filter(|&(i, j, _)| i + j > 0).collect();
        let mut h = Dense::zero(trunc);
        h.set(0, 0, inv0.clone());
        for i in 0..=trunc.x {
            for j in 0..=trunc.y {
                if i == 0 && j == 0 {
                    continue;
                }
                let mut acc = Rational::zero();
                for &(a, b, c) in &g {
                    if a > i {
                        break;
                    }
                    if b <= j {
                        let prev = h.get(i - a, j - b);
                        if !prev.is_zero() {
                            acc += c * prev;
                        }
                    }
                }
                if !acc.is_zero() {
                    h.set(i, j, -acc * &inv0);
                }
            }
        }
        Ok(h.into_series())
    }

    /// `self / other`.
    pub fn div(&self, other: &BiSeries) -> Result<BiSeries> {
        Ok(self * &other.inv()?)
    }

    /// `exp(t) - sum_{i<k} t^i/i!`, the exponential restricted to parts of size at least `k`.
    pub fn exp_at_least(&self, k: u32) -> Result<BiSeries> {
        let mut out = self.exp()?;
        let mut term = BiSeries::one(self.trunc);
        let mut fact = Rational::one();
        for i in 0..k {
            if i > 0 {
                term = &term * self;
                fact *= int(i as i64);
            }
            out = &out - &term.scale(&(Rational::one() / &fact));
        }
        Ok(out)
    }

    /// `log(1/(1-t)) - sum_{1<=i<k} t^i/i`, cycles of length at least `k`.
    pub fn loga_at_least(&self, k: u32) -> Result<BiSeries> {
        self.require_constant(&Rational::zero(), "0")?;
        let one = BiSeries::one(self.trunc);
        let mut out = -(&one - self).log()?;
        let mut term = one;
        for i in 1..k {
            term = &term * self;
            out = &out - &term.scale(&(Rational::one() / int(i as i64)));
        }
        Ok(out)
    }

    fn require_constant(&self, expected: &Rational, label: &str) -> Result<()> {
        let c0 = self.constant_term();
        if &c0 != expected {
            return Err(SeriesError::ConstantTermViolation { expected: label.into(), found: c0 });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, Trunc, Var};
    use super::*;

    #[test]
    fn exp_of_x_is_inverse_factorials() {
        let t = Trunc::new(6, 0);
        let e = BiSeries::var(Var::X, t).exp().unwrap();
        let mut f = 1i64;
        for n in 0..=6 {
            if n > 0 {
                f *= n;
            }
            assert_eq!(e.coeff(n as u32, 0), rat(1, f));
        }
    }

    #[test]
    fn log_inverts_exp_bivariate() {
        let t = Trunc::new(5, 5);
        let f = BiSeries::from_terms([(1, 0, rat(2, 3)), (0, 1, int(-1)), (1, 2, rat(5, 7))], t);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn reciprocal_times_self_is_one() {
        let t = Trunc::new(5, 5);
        let g = BiSeries::from_terms([(0, 0, int(3)), (1, 0, int(1)), (2, 3, rat(-1, 2))], t);
        assert_eq!(&g * &g.inv().unwrap(), BiSeries::one(t));
    }

    #[test]
    fn constant_term_guards() {
        let t = Trunc::new(2, 2);
        assert!(matches!(BiSeries::one(t).exp(), Err(SeriesError::ConstantTermViolation { .. })));
        assert!(matches!(BiSeries::zero(t).log(), Err(SeriesError::ConstantTermViolation { .. })));
        assert!(matches!(BiSeries::zero(t).inv(), Err(SeriesError::ConstantTermViolation { .. })));
    }

    #[test]
    fn restricted_exponential_and_cycles() {
        let t = Trunc::new(5, 0);
        let x = BiSeries::var(Var::X, t);
        let e2 = x.exp_at_least(2).unwrap();
        assert!(e2.coeff(0, 0).is_zero() && e2.coeff(1, 0).is_zero());
        assert_eq!(e2.coeff(2, 0), rat(1, 2));
        let l3 = x.loga_at_least(3).unwrap();
        assert!(l3.coeff(2, 0).is_zero());
        assert_eq!(l3.coeff(3, 0), rat(1, 3));
        assert_eq!(l3.coeff(5, 0), rat(1, 5));
    }
}
