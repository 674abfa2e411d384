//! Exact enumeration of labelled planar graphs through the grammar of
//! connectivity decompositions, with closed-form planar-map terminals and
//! brute-force oracles to check them against.

pub mod grammar;
pub mod graph;
pub mod oracle;
pub mod planarmaps;
pub mod series;

pub use series::{BiSeries, Rational, SeriesError, Trunc, Var};

use thiserror::Error;

/// Any failure of the library, for callers that drive several modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Grammar(#[from] grammar::GrammarError),
    #[error(transparent)]
    Maps(#[from] planarmaps::MapsError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

impl Error {
    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Series(_) => "series",
            Error::Graph(_) => "graph",
            Error::Grammar(_) => "grammar",
            Error::Maps(_) => "planar_maps",
            Error::Oracle(_) => "oracle",
        }
    }
}
