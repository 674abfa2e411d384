//! The `tutte` command: counts, series dumps, graph decompositions and
//! verification suites.
//!
//! Exit status is 0 on success, 1 when a computation fails or a
//! verification finds a mismatch (with a JSON error object on standard
//! error), and 2 on usage errors.

pub mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use config::{parse_level, Edges, Family, FamilyConfig, FamilyFlags};
use tutte_core::grammar::{self, ClassTag, Convention, CountTable, FamilyTerminals, GrammarOutput};
use tutte_core::graph::{restricted_rmt_tree, rmt_tree, Multigraph};
use tutte_core::oracle::{self, LevelSeries};
use tutte_core::planarmaps::{self, Diagnostics};
use tutte_core::{BiSeries, Rational, Trunc};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("conflicting flags: {0}")]
    ConflictingFlags(String),
    #[error(transparent)]
    Core(#[from] tutte_core::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::ConflictingFlags(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::ConflictingFlags(_) => "conflicting_flags",
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Input(_) => "input",
            CliError::VerificationFailed(_) => "verification_failed",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

macro_rules! core_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}
core_from!(
    tutte_core::SeriesError,
    tutte_core::graph::GraphError,
    grammar::GrammarError,
    planarmaps::MapsError,
    oracle::OracleError
);

#[derive(Parser, Debug)]
#[command(name = "tutte", version, about = "Exact counting of labelled planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct FamilyArgs {
    /// planar, series-parallel, forest or custom:<terminals-dir> [env: TUTTE_FAMILY]
    #[arg(long)]
    family: Option<String>,
    /// Largest vertex count [env: TUTTE_NMAX, default 6]
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest edge count [env: TUTTE_MMAX, default nmax(nmax-1)/2]
    #[arg(long)]
    mmax: Option<u32>,
    /// Simple graphs (the default) [env: TUTTE_EDGES=simple]
    #[arg(long)]
    simple: bool,
    /// Multigraphs [env: TUTTE_EDGES=multi]
    #[arg(long)]
    multi: bool,
}

impl FamilyArgs {
    fn flags(&self) -> FamilyFlags {
        FamilyFlags {
            family: self.family.clone(),
            nmax: self.nmax,
            mmax: self.mmax,
            simple: self.simple,
            multi: self.multi,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the count table of a family as CSV (n,m,count).
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        /// all, connected, two-connected or three-connected
        #[arg(long, default_value = "all")]
        level: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the series of one pipeline stage as JSON.
    Series {
        /// terminals, networks, g2, g1 or g
        #[arg(long)]
        stage: String,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// For the terminals stage: write g3.json, g3_pointed.json and
        /// g3_rooted.json, readable back with --family custom:<dir>.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decompose a graph given as {"n": .., "edges": [[u, v], ..]}.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        /// Also compute the RMT-tree restricted to this vertex.
        #[arg(long)]
        point: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exits with status 1 on any mismatch.
    Verify {
        /// grammar-vs-oracle, double-routes, dissymmetry or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest vertex count for exhaustive comparisons [env: TUTTE_NMAX, default 6]
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line `args` (including the program name). Returns the exit status.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, env, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, env: &dyn Fn(&str) -> Option<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Count { family, level, out } => {
            let cfg = FamilyConfig::resolve(&family.flags(), env)?;
            let level = parse_level(&level)?;
            let text = count_csv(&cfg, level)?;
            emit(out.as_deref(), text.as_bytes(), stdout)
        }
        Command::Series { stage, family, out, out_dir } => {
            let cfg = FamilyConfig::resolve(&family.flags(), env)?;
            let stage = Stage::parse(&stage)?;
            if out_dir.is_some() && stage != Stage::Terminals {
                return Err(CliError::Usage("--out-dir is only available for --stage terminals".into()));
            }
            let computed = compute(&cfg, stage)?;
            let dump = series_dump(&cfg, stage, &computed)?;
            if let Some(dir) = out_dir {
                write_terminals(&dir, &cfg, &computed)?;
            }
            emit(out.as_deref(), pretty(&dump).as_bytes(), stdout)
        }
        Command::Decompose { graph, point, out } => {
            let text = read(&graph)?;
            let g = Multigraph::from_json_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
            let dump = decompose(&g, &graph, point)?;
            emit(out.as_deref(), pretty(&dump).as_bytes(), stdout)
        }
        Command::Verify { suite, nmax, out } => {
            let flags = FamilyFlags { nmax, ..Default::default() };
            let nmax = FamilyConfig::resolve(&flags, env)?.nmax;
            let suites = Suite::parse(&suite)?;
            let report = verify(&suites, &suite, nmax)?;
            let passed = report["passed"].as_bool().unwrap_or(false);
            emit(out.as_deref(), pretty(&report).as_bytes(), stdout)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::VerificationFailed(format!("suite {suite} reported mismatches")))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Writes to `out` atomically (temporary file in the same directory, then
/// rename), or to standard output.
fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        None => stdout.write_all(bytes).map_err(|e| CliError::Io { path: "<stdout>".into(), message: e.to_string() }),
        Some(path) => write_atomic(path, bytes),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Terminals,
    Networks,
    G2,
    G1,
    G,
}

impl Stage {
    fn parse(s: &str) -> Result<Stage, CliError> {
        match s {
            "terminals" => Ok(Stage::Terminals),
            "networks" => Ok(Stage::Networks),
            "g2" => Ok(Stage::G2),
            "g1" => Ok(Stage::G1),
            "g" => Ok(Stage::G),
            _ => Err(CliError::Usage(format!("unknown stage {s:?}; expected terminals, networks, g2, g1 or g"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Stage::Terminals => "terminals",
            Stage::Networks => "networks",
            Stage::G2 => "g2",
            Stage::G1 => "g1",
            Stage::G => "g",
        }
    }
}

/// Everything computed for a family.
struct Computed {
    terminals: FamilyTerminals,
    /// Absent for forests, which bypass the network level.
    output: Option<GrammarOutput>,
    levels: Option<LevelSeries>,
    diagnostics: Option<Diagnostics>,
}

fn load_series(dir: &Path, name: &str) -> Result<BiSeries, CliError> {
    let path = dir.join(name);
    let value: Value = serde_json::from_str(&read(&path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let series = value.get("series").unwrap_or(&value);
    BiSeries::from_json_value(series).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn terminals_for(cfg: &FamilyConfig, trunc: Trunc) -> Result<(FamilyTerminals, Option<Diagnostics>), CliError> {
    let mode = cfg.edges.mode();
    Ok(match &cfg.family {
        Family::Planar => {
            let mut diag = Diagnostics::new();
            let mut t = planarmaps::planar_terminals(trunc, &mut diag)?;
            t.mode = mode;
            (t, Some(diag))
        }
        Family::SeriesParallel | Family::Forest => (FamilyTerminals::series_parallel(mode, trunc), None),
        Family::Custom(dir) => {
            let t = FamilyTerminals::new(
                load_series(dir, "g3.json")?,
                load_series(dir, "g3_pointed.json")?,
                load_series(dir, "g3_rooted.json")?,
                mode,
            )?;
            (t, None)
        }
    })
}

fn compute(cfg: &FamilyConfig, stage: Stage) -> Result<Computed, CliError> {
    let trunc = Trunc::new(cfg.nmax, cfg.mmax);
    let (terminals, diagnostics) = terminals_for(cfg, trunc)?;
    if cfg.family == Family::Forest {
        if stage == Stage::Networks {
            return Err(CliError::Usage("forests have no network stage".into()));
        }
        let (g1, g) = grammar::forest_series(trunc)?;
        let g2 = BiSeries::monomial(2, 1, Rational::new(1.into(), 2.into()), trunc);
        let levels = LevelSeries { all: g, connected: g1, two_connected: g2, three_connected: BiSeries::zero(trunc) };
        return Ok(Computed { terminals, output: None, levels: Some(levels), diagnostics });
    }
    if stage == Stage::Terminals {
        return Ok(Computed { terminals, output: None, levels: None, diagnostics });
    }
    let out = grammar::run(&terminals, trunc)?;
    let levels = LevelSeries::from_grammar(&out, &terminals);
    Ok(Computed { terminals, output: Some(out), levels: Some(levels), diagnostics })
}

fn convention(edges: Edges) -> Convention {
    match edges {
        Edges::Simple => Convention::VertexLabelled,
        Edges::Multi => Convention::EdgeLabelled,
    }
}

/// CSV with a comment line carrying the configuration, then `n,m,count`
/// rows and an `n,total,count` row per vertex count.
fn count_csv(cfg: &FamilyConfig, level: ClassTag) -> Result<String, CliError> {
    let computed = compute(cfg, Stage::G)?;
    let levels = computed.levels.expect("levels computed for stage g");
    let conv = convention(cfg.edges);
    let table = CountTable::extract(levels.level(level), conv, level)?.restrict(cfg.nmax, cfg.mmax);
    let header = json!({ "command": "count", "config": cfg, "level": level, "convention": conv,
        "truncation": [cfg.nmax, cfg.mmax] });
    let mut s = format!("# {header}\nn,m,count\n");
    let mut by_n: BTreeMap<u32, Vec<(u32, String)>> = BTreeMap::new();
    for (n, m, c) in table.rows() {
        by_n.entry(n).or_default().push((m, c.to_string()));
    }
    for n in 1..=cfg.nmax {
        for (m, c) in by_n.get(&n).into_iter().flatten() {
            s.push_str(&format!("{n},{m},{c}\n"));
        }
        s.push_str(&format!("{n},total,{}\n", table.total(n)));
    }
    Ok(s)
}

fn series_dump(cfg: &FamilyConfig, stage: Stage, c: &Computed) -> Result<Value, CliError> {
    let mut series = serde_json::Map::new();
    let mut put = |k: &str, s: &BiSeries| {
        let v: Value = serde_json::from_str(&s.to_json_string()).expect("series JSON is valid");
        series.insert(k.to_string(), v);
    };
    match stage {
        Stage::Terminals => {
            put("G3", &c.terminals.g3);
            put("G3_pointed", &c.terminals.g3_pointed);
            put("G3_rooted", &c.terminals.g3_rooted);
        }
        Stage::Networks => {
            let n = &c.output.as_ref().expect("networks computed").networks;
            put("D", &n.d);
            put("S", &n.s);
            put("P", &n.p);
            put("H", &n.h);
        }
        Stage::G2 => match &c.output {
            Some(o) => {
                put("G2", &o.g2);
                put("G2_pointed", &o.g2_pointed);
            }
            None => put("G2", &c.levels.as_ref().expect("levels").two_connected),
        },
        Stage::G1 => match &c.output {
            Some(o) => {
                put("G1", &o.g1);
                put("C_pointed", &o.c_pointed);
            }
            None => put("G1", &c.levels.as_ref().expect("levels").connected),
        },
        Stage::G => put("G", &c.levels.as_ref().expect("levels").all),
    }
    let mut dump = json!({
        "command": "series",
        "config": cfg,
        "stage": stage.name(),
        "truncation": [cfg.nmax, cfg.mmax],
        "series": series,
    });
    if let Some(d) = &c.diagnostics {
        dump["diagnostics"] = serde_json::to_value(d).expect("diagnostics serialise");
    }
    Ok(dump)
}

fn write_terminals(dir: &Path, cfg: &FamilyConfig, c: &Computed) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), message: e.to_string() })?;
    for (file, s) in [
        ("g3.json", &c.terminals.g3),
        ("g3_pointed.json", &c.terminals.g3_pointed),
        ("g3_rooted.json", &c.terminals.g3_rooted),
    ] {
        let v = json!({
            "config": cfg,
            "truncation": [s.trunc().x, s.trunc().y],
            "series": serde_json::from_str::<Value>(&s.to_json_string()).expect("series JSON is valid"),
        });
        write_atomic(&dir.join(file), pretty(&v).as_bytes())?;
    }
    if let Some(d) = &c.diagnostics {
        write_atomic(&dir.join("diagnostics.json"), pretty(&serde_json::to_value(d).expect("serialise")).as_bytes())?;
    }
    Ok(())
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("decomposition serialises")
}

fn decompose(g: &Multigraph, path: &Path, point: Option<usize>) -> Result<Value, CliError> {
    let class = g.connectivity_class()?;
    let mut dump = json!({
        "command": "decompose",
        "config": { "graph": path.display().to_string(), "point": point },
        "graph": g.to_json_value(),
        "connectivity": class,
        "bv_tree": Value::Null,
        "rmt_tree": Value::Null,
    });
    if g.is_connected() {
        dump["bv_tree"] = to_value(&g.block_tree()?);
    }
    if g.is_two_connected() && g.m() >= 3 {
        dump["rmt_tree"] = to_value(&rmt_tree(g)?);
    }
    if let Some(v) = point {
        dump["restricted_rmt_tree"] = to_value(&restricted_rmt_tree(g, v)?);
    }
    Ok(dump)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    GrammarVsOracle,
    DoubleRoutes,
    Dissymmetry,
}

impl Suite {
    fn parse(s: &str) -> Result<Vec<Suite>, CliError> {
        match s {
            "grammar-vs-oracle" => Ok(vec![Suite::GrammarVsOracle]),
            "double-routes" => Ok(vec![Suite::DoubleRoutes]),
            "dissymmetry" => Ok(vec![Suite::Dissymmetry]),
            "all" => Ok(vec![Suite::GrammarVsOracle, Suite::DoubleRoutes, Suite::Dissymmetry]),
            _ => Err(CliError::Usage(format!(
                "unknown suite {s:?}; expected grammar-vs-oracle, double-routes, dissymmetry or all"
            ))),
        }
    }
}

/// Order of the double-route comparisons: `x` up to 8, second variable up to 12.
pub const DOUBLE_ROUTE_ORDER: (u32, u32) = (8, 12);

fn verify(suites: &[Suite], name: &str, nmax: u32) -> Result<Value, CliError> {
    let mut results = serde_json::Map::new();
    let mut passed = true;
    for &suite in suites {
        let (key, value, ok) = match suite {
            Suite::GrammarVsOracle => {
                let trunc = Trunc::new(nmax, nmax * nmax.saturating_sub(1) / 2);
                let mut diag = Diagnostics::new();
                let planar = planarmaps::planar_terminals(trunc, &mut diag)?;
                let out = grammar::run(&planar, trunc)?;
                let planar_report =
                    oracle::crosscheck(&LevelSeries::from_grammar(&out, &planar), &oracle::planar_count_tables(nmax as usize)?, nmax)?;
                let sp = FamilyTerminals::series_parallel(grammar::EdgeMode::Simple, trunc);
                let out = grammar::run(&sp, trunc)?;
                let sp_report = oracle::crosscheck(
                    &LevelSeries::from_grammar(&out, &sp),
                    &oracle::series_parallel_count_tables(nmax as usize)?,
                    nmax,
                )?;
                let ok = planar_report.passed && sp_report.passed;
                ("grammar-vs-oracle", json!({ "planar": planar_report, "series_parallel": sp_report, "passed": ok }), ok)
            }
            Suite::DoubleRoutes => {
                let (nx, ns) = DOUBLE_ROUTE_ORDER;
                let mut diag = planarmaps::double_route_report(Trunc::new(nx, ns))?;
                rotation_system_checks(&mut diag)?;
                let ok = diag.all_passed();
                ("double-routes", json!({ "report": diag, "passed": ok }), ok)
            }
            Suite::Dissymmetry => {
                let graphs = oracle::connected_planar_graphs(nmax.min(6) as usize)?;
                let report = oracle::dissymmetry_census(&graphs)?;
                let ok = report.passed();
                ("dissymmetry", json!({ "report": report, "passed": ok }), ok)
            }
        };
        passed &= ok;
        results.insert(key.to_string(), value);
    }
    Ok(json!({
        "command": "verify",
        "config": { "suite": name, "nmax": nmax, "double_route_order": [DOUBLE_ROUTE_ORDER.0, DOUBLE_ROUTE_ORDER.1] },
        "suites": results,
        "passed": passed,
    }))
}

/// Rooted and vertex-pointed map coefficients against rotation-system enumeration.
fn rotation_system_checks(diag: &mut Diagnostics) -> Result<(), CliError> {
    let m_max = oracle::MAP_MAX_EDGES as u32;
    let order = Trunc::new(m_max, 2 * m_max);
    let beta = planarmaps::solve_beta(Trunc::new(order.x + 1, order.y + 4), false)?;
    let rooted = planarmaps::rooted_maps(&beta, diag)?;
    let pointed = planarmaps::mobile_series(order, diag)?.m_pointed;
    for m in 1..=m_max {
        let edges = if m == 1 { "1 edge".to_string() } else { format!("{m} edges") };
        let census = oracle::enum_rooted_maps(m as usize)?;
        let mut r = BiSeries::zero(Trunc::new(order.x, 2 * m));
        let mut p = BiSeries::zero(Trunc::new(order.x, 2 * m));
        for (&v, c) in &census.rooted {
            r = &r + &BiSeries::monomial(v as u32 - 1, 2 * m, Rational::from_integer(c.clone()), r.trunc());
        }
        for (&v, c) in &census.pointed {
            p = &p + &BiSeries::monomial(v as u32 - 1, 2 * m, c.clone(), p.trunc());
        }
        let slice = |s: &BiSeries| {
            BiSeries::from_terms(s.terms().filter(|&(_, j, _)| j == 2 * m).map(|(i, j, c)| (i, j, c.clone())), r.trunc())
        };
        diag.compare(&format!("rooted maps with {edges}: series = rotation systems"), &slice(&rooted), &r);
        diag.compare(&format!("vertex-pointed maps with {edges}: series = rotation systems"), &slice(&pointed), &p);
        diag.assert(&format!("rotation systems with {edges} satisfy Euler's formula"), census.consistent, || {
            "inconsistent census".into()
        });
    }
    Ok(())
}
