//! Integer count tables extracted from exponential series.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{GrammarError, Result};
use crate::series::{BiSeries, Rational, Trunc};

/// How coefficients are normalised into counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Vertices and edges labelled: `n! m! [x^n y^m]`.
    EdgeLabelled,
    /// Only vertices labelled: `n! [x^n y^m]`. Meaningful for simple graphs,
    /// where the edges of a vertex-labelled graph can be labelled in exactly `m!` ways.
    VertexLabelled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    All,
    Connected,
    TwoConnected,
    ThreeConnected,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::All => "all",
            ClassTag::Connected => "connected",
            ClassTag::TwoConnected => "two_connected",
            ClassTag::ThreeConnected => "three_connected",
        })
    }
}

/// Exact counts keyed by (vertices, edges). Zero counts are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub class: ClassTag,
    pub convention: Convention,
    rows: BTreeMap<(u32, u32), BigInt>,
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl CountTable {
    pub fn new(class: ClassTag, convention: Convention) -> Self {
        CountTable { class, convention, rows: BTreeMap::new() }
    }

    fn weight(&self, n: u32, m: u32) -> BigInt {
        match self.convention {
            Convention::EdgeLabelled => factorial(n) * factorial(m),
            Convention::VertexLabelled => factorial(n),
        }
    }

    /// Extracts all counts of `s`, failing on any non-integral or negative value.
    pub fn extract(s: &BiSeries, convention: Convention, class: ClassTag) -> Result<Self> {
        let mut t = CountTable::new(class, convention);
        for (n, m, c) in s.terms() {
            let v = c * Rational::from_integer(t.weight(n, m));
            if !v.is_integer() {
                return Err(GrammarError::NonIntegerCount { n, m, value: v.to_string() });
            }
            if v.is_negative() {
                return Err(GrammarError::NegativeCount { n, m, value: v.to_string() });
            }
            t.rows.insert((n, m), v.to_integer());
        }
        Ok(t)
    }

    pub fn insert(&mut self, n: u32, m: u32, count: BigInt) {
        if count.is_zero() {
            self.rows.remove(&(n, m));
        } else {
            self.rows.insert((n, m), count);
        }
    }

    pub fn get(&self, n: u32, m: u32) -> BigInt {
        self.rows.get(&(n, m)).cloned().unwrap_or_default()
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.rows.iter().map(|(&(n, m), c)| (n, m, c))
    }

    /// Sum over all edge counts for `n` vertices.
    pub fn total(&self, n: u32) -> BigInt {
        self.rows.range((n, 0)..=(n, u32::MAX)).map(|(_, c)| c).sum()
    }

    /// Keeps only rows with `n <= nmax` and `m <= mmax`.
    pub fn restrict(&self, nmax: u32, mmax: u32) -> CountTable {
        CountTable {
            class: self.class,
            convention: self.convention,
            rows: self.rows.iter().filter(|(&(n, m), _)| n <= nmax && m <= mmax).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// The series whose extraction gives back this table.
    pub fn to_series(&self, trunc: Trunc) -> BiSeries {
        BiSeries::from_terms(
            self.rows.iter().map(|(&(n, m), c)| (n, m, Rational::new(c.clone(), self.weight(n, m)))),
            trunc,
        )
    }

    /// Entries where two tables differ, as `(n, m, self, other)`.
    pub fn differences(&self, other: &CountTable) -> Vec<(u32, u32, BigInt, BigInt)> {
        let mut keys: Vec<_> = self.rows.keys().chain(other.rows.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(n, m)| {
                let (a, b) = (self.get(n, m), other.get(n, m));
                (a != b).then_some((n, m, a, b))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    #[test]
    fn link_graph_count() {
        let s = BiSeries::monomial(2, 1, rat(1, 2), Trunc::new(3, 3));
        let t = CountTable::extract(&s, Convention::EdgeLabelled, ClassTag::TwoConnected).unwrap();
        assert_eq!(t.get(2, 1), BigInt::from(1));
        assert_eq!(t.to_series(Trunc::new(3, 3)), s);
    }

    #[test]
    fn empty_and_bad_series() {
        let trunc = Trunc::new(3, 3);
        let t = CountTable::extract(&BiSeries::zero(trunc), Convention::EdgeLabelled, ClassTag::All).unwrap();
        assert_eq!(t.rows().count(), 0);
        let bad = BiSeries::monomial(2, 1, rat(1, 3), trunc);
        assert!(matches!(
            CountTable::extract(&bad, Convention::EdgeLabelled, ClassTag::All),
            Err(GrammarError::NonIntegerCount { n: 2, m: 1, .. })
        ));
        let neg = BiSeries::monomial(1, 0, int(-1), trunc);
        assert!(matches!(CountTable::extract(&neg, Convention::VertexLabelled, ClassTag::All), Err(GrammarError::NegativeCount { .. })));
    }

    #[test]
    fn totals_by_vertex_count() {
        let s = BiSeries::from_terms([(3, 2, rat(1, 2)), (3, 3, rat(1, 6))], Trunc::new(3, 3));
        let t = CountTable::extract(&s, Convention::VertexLabelled, ClassTag::Connected).unwrap();
        assert_eq!(t.total(3), BigInt::from(4));
    }
}
