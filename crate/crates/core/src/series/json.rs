//! JSON form `{"trunc":[Nx,Ny],"terms":[[i,j,"p/q"],...]}`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{BiSeries, Rational, Result, SeriesError, Trunc};

/// Wire representation of a [`BiSeries`]. Unknown fields are ignored on input.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub trunc: [u32; 2],
    pub terms: Vec<(u32, u32, String)>,
}

fn format_rational(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || SeriesError::Malformed(format!("coefficient `{s}` is not of the form p/q"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q <= BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

impl From<&BiSeries> for SeriesJson {
    fn from(s: &BiSeries) -> Self {
        SeriesJson {
            trunc: [s.trunc().x, s.trunc().y],
            terms: s.terms().map(|(i, j, c)| (i, j, format_rational(c))).collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for BiSeries {
    type Error = SeriesError;

    fn try_from(j: &SeriesJson) -> Result<BiSeries> {
        let trunc = Trunc::new(j.trunc[0], j.trunc[1]);
        let mut terms = Vec::with_capacity(j.terms.len());
        for (a, b, c) in &j.terms {
            if !trunc.contains(*a, *b) {
                return Err(SeriesError::Malformed(format!("term x^{a} y^{b} lies outside {trunc}")));
            }
            terms.push((*a, *b, parse_rational(c)?));
        }
        Ok(BiSeries::from_terms(terms, trunc))
    }
}

impl BiSeries {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SeriesJson::from(self)).expect("series always serialises")
    }

    /// Compact JSON text with keys in the order `trunc`, `terms`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series always serialises")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<BiSeries> {
        let j: SeriesJson =
            serde_json::from_value(v.clone()).map_err(|e| SeriesError::Malformed(e.to_string()))?;
        BiSeries::try_from(&j)
    }

    pub fn from_json_str(s: &str) -> Result<BiSeries> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| SeriesError::Malformed(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    #[test]
    fn round_trip_and_format() {
        let s = BiSeries::from_terms([(2, 1, rat(-3, 6)), (0, 0, int(4))], Trunc::new(3, 2));
        let text = s.to_json_string();
        assert_eq!(text, r#"{"trunc":[3,2],"terms":[[0,0,"4/1"],[2,1,"-1/2"]]}"#);
        assert_eq!(BiSeries::from_json_str(&text).unwrap(), s);
    }

    #[test]
    fn extra_keys_are_ignored() {
        let text = r#"{"config":{"n":3},"trunc":[1,1],"terms":[[1,1,"2/3"]]}"#;
        assert_eq!(BiSeries::from_json_str(text).unwrap().coeff(1, 1), rat(2, 3));
    }

    #[test]
    fn malformed_inputs() {
        assert!(BiSeries::from_json_str(r#"{"trunc":[1,1],"terms":[[1,1,"2"]]}"#).is_err());
        assert!(BiSeries::from_json_str(r#"{"trunc":[1,1],"terms":[[2,1,"1/2"]]}"#).is_err());
        assert!(BiSeries::from_json_str(r#"{"trunc":[1,1],"terms":[[1,1,"1/0"]]}"#).is_err());
    }
}
