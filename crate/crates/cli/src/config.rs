//! Effective configuration: command-line flags override `TUTTE_*`
//! environment variables, which override built-in defaults.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use tutte_core::grammar::{ClassTag, EdgeMode};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Planar,
    SeriesParallel,
    Forest,
    /// Terminal series read from a directory.
    Custom(PathBuf),
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "planar" => Ok(Family::Planar),
            "series-parallel" => Ok(Family::SeriesParallel),
            "forest" => Ok(Family::Forest),
            _ => match s.strip_prefix("custom:") {
                Some(dir) if !dir.is_empty() => Ok(Family::Custom(PathBuf::from(dir))),
                _ => Err(CliError::Usage(format!(
                    "unknown family {s:?}; expected planar, series-parallel, forest or custom:<dir>"
                ))),
            },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Planar => f.write_str("planar"),
            Family::SeriesParallel => f.write_str("series-parallel"),
            Family::Forest => f.write_str("forest"),
            Family::Custom(dir) => write!(f, "custom:{}", dir.display()),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Edges {
    Simple,
    Multi,
}

impl Edges {
    pub fn mode(self) -> EdgeMode {
        match self {
            Edges::Simple => EdgeMode::Simple,
            Edges::Multi => EdgeMode::Multi,
        }
    }
}

impl FromStr for Edges {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "simple" => Ok(Edges::Simple),
            "multi" => Ok(Edges::Multi),
            _ => Err(CliError::Usage(format!("unknown edge mode {s:?}; expected simple or multi"))),
        }
    }
}

pub fn parse_level(s: &str) -> Result<ClassTag, CliError> {
    match s {
        "all" => Ok(ClassTag::All),
        "connected" => Ok(ClassTag::Connected),
        "two-connected" => Ok(ClassTag::TwoConnected),
        "three-connected" => Ok(ClassTag::ThreeConnected),
        _ => Err(CliError::Usage(format!(
            "unknown level {s:?}; expected all, connected, two-connected or three-connected"
        ))),
    }
}

/// Family options as given on the command line (all optional).
#[derive(Clone, Debug, Default)]
pub struct FamilyFlags {
    pub family: Option<String>,
    pub nmax: Option<u32>,
    pub mmax: Option<u32>,
    pub simple: bool,
    pub multi: bool,
}

/// Resolved family options, echoed into every artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyConfig {
    pub family: Family,
    pub edges: Edges,
    pub nmax: u32,
    /// Largest edge count kept; defaults to `nmax(nmax-1)/2`, every simple graph.
    pub mmax: u32,
}

pub const DEFAULT_NMAX: u32 = 6;

fn parse_num(what: &str, s: &str) -> Result<u32, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: expected a nonnegative integer, got {s:?}")))
}

impl FamilyConfig {
    /// Resolves `flags` against the environment lookup `env`.
    pub fn resolve(flags: &FamilyFlags, env: &dyn Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        if flags.simple && flags.multi {
            return Err(CliError::ConflictingFlags("--simple and --multi".into()));
        }
        let family = match flags.family.clone().or_else(|| env("TUTTE_FAMILY")) {
            Some(s) => s.parse()?,
            None => Family::Planar,
        };
        let edges = if flags.simple {
            Edges::Simple
        } else if flags.multi {
            Edges::Multi
        } else {
            match env("TUTTE_EDGES") {
                Some(s) => s.parse()?,
                None => Edges::Simple,
            }
        };
        let nmax = match flags.nmax {
            Some(n) => n,
            None => env("TUTTE_NMAX").map(|s| parse_num("TUTTE_NMAX", &s)).transpose()?.unwrap_or(DEFAULT_NMAX),
        };
        let mmax = match flags.mmax {
            Some(m) => m,
            None => env("TUTTE_MMAX")
                .map(|s| parse_num("TUTTE_MMAX", &s))
                .transpose()?
                .unwrap_or(nmax * nmax.saturating_sub(1) / 2),
        };
        Ok(FamilyConfig { family, edges, nmax, mmax })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn defaults() {
        let c = FamilyConfig::resolve(&FamilyFlags::default(), &env_of(&[])).unwrap();
        assert_eq!(c, FamilyConfig { family: Family::Planar, edges: Edges::Simple, nmax: 6, mmax: 15 });
    }

    #[test]
    fn flags_override_environment() {
        let env = env_of(&[("TUTTE_NMAX", "4"), ("TUTTE_EDGES", "multi"), ("TUTTE_FAMILY", "forest")]);
        let c = FamilyConfig::resolve(&FamilyFlags::default(), &env).unwrap();
        assert_eq!((c.nmax, c.edges, c.family.clone()), (4, Edges::Multi, Family::Forest));
        let flags = FamilyFlags { nmax: Some(3), simple: true, family: Some("planar".into()), ..Default::default() };
        let c = FamilyConfig::resolve(&flags, &env).unwrap();
        assert_eq!((c.nmax, c.edges, c.family), (3, Edges::Simple, Family::Planar));
    }

    #[test]
    fn conflicts_and_bad_values() {
        let flags = FamilyFlags { simple: true, multi: true, ..Default::default() };
        assert!(matches!(FamilyConfig::resolve(&flags, &env_of(&[])), Err(CliError::ConflictingFlags(_))));
        assert!(matches!(FamilyConfig::resolve(&FamilyFlags::default(), &env_of(&[("TUTTE_NMAX", "x")])), Err(CliError::Usage(_))));
        assert_eq!("custom:dir".parse::<Family>().unwrap(), Family::Custom("dir".into()));
        assert!("custom:".parse::<Family>().is_err());
    }
}
