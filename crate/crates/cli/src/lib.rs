//! Command-line front end for `indexlab-core`.
//!
//! Every command writes one JSON document (or a CSV projection of a table)
//! to stdout. Exit codes: 0 success, 1 a checked inequality or identity
//! failed, 2 bad input.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use indexlab_core::morse::{
    betti, check_identity, check_morse_inequalities, morse_numbers, poincare_series_truncated,
    BettiTable, MorseError, Violation,
};
use indexlab_core::prover::{certificate, verify_certificate, Certificate};
use indexlab_core::{ExactReal, GeodesicModel, NcgCase};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "INDEXLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "indexlab", version, about = "Index iteration, Morse tables and case replay for closed geodesics on spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Index, nullity and critical type of the first iterates of one geodesic.
    Iterate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        mmax: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Betti numbers of the free loop space quotient up to degree `qmax`.
    Betti {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Poincaré series coefficients through `degree`, by series division.
    Series {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Morse numbers of a set of geodesics against the Betti numbers.
    MorseCheck {
        #[arg(long)]
        models: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Both sides of the mean index identity.
    Identity {
        #[arg(long)]
        models: PathBuf,
    },
    /// Replay the case analysis on `S^n` and verify every step.
    Prove {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, value_parser = parse_case)]
        case: Option<NcgCase>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_case(s: &str) -> Result<NcgCase, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("{path}:{line}:{column}: at `{field}`: {message}")]
    Parse {
        path: String,
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{THREADS_VAR} must be a positive integer, got {0:?}")]
    Threads(String),
}

/// Exit code plus everything the process should print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn failed(stdout: String, stderr: String) -> Self {
        Outcome { code: EXIT_FAILED_CHECK, stdout, stderr }
    }

    fn from_error(err: &CliError) -> Self {
        Outcome {
            code: EXIT_BAD_INPUT,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Sizes the global rayon pool from `INDEXLAB_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(raw) = value else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Threads(raw.to_string()))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn run(cmd: &Command) -> Outcome {
    execute(cmd).unwrap_or_else(|e| Outcome::from_error(&e))
}

fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Iterate { model, mmax, csv } => iterate(model, *mmax, *csv),
        Command::Betti { n, qmax, csv } => betti_cmd(*n, *qmax, *csv),
        Command::Series { n, degree, csv } => series_cmd(*n, *degree, *csv),
        Command::MorseCheck { models, horizon, csv } => morse_check(models, *horizon, *csv),
        Command::Identity { models } => identity(models),
        Command::Prove { n, case, json } => prove(*n, *case, json.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Deserializes with the offending field path and position in the error.
fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            path: path.display().to_string(),
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        field: ".".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output types serialize");
    s.push('\n');
    s
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of numbers and strings is utf-8"))
}

#[derive(Serialize)]
struct IterateRow {
    m: u64,
    i: i64,
    nu: i64,
    epsilon: i8,
    k0: u8,
}

#[derive(Serialize)]
struct IterateReport {
    n: u32,
    case: NcgCase,
    mean_index: ExactReal,
    period: u32,
    rows: Vec<IterateRow>,
}

fn iterate(path: &Path, mmax: u64, csv: bool) -> Result<Outcome, CliError> {
    let model: GeodesicModel = parse_json(path, &read(path)?)?;
    let rows: Vec<IterateRow> = (1..=mmax)
        .map(|m| {
            let (i, nu) = model.index_of_iterate(m);
            let t = model.critical_type(m);
            IterateRow { m, i, nu, epsilon: t.epsilon, k0: t.k0 }
        })
        .collect();
    if csv {
        return Ok(Outcome::ok(to_csv(rows)?));
    }
    Ok(Outcome::ok(to_json(&IterateReport {
        n: model.n(),
        case: model.case(),
        mean_index: model.mean_index(),
        period: model.analytic_period(),
        rows,
    })))
}

#[derive(Serialize)]
struct DegreeRow {
    q: u64,
    value: i64,
}

fn betti_cmd(n: u32, qmax: u64, csv: bool) -> Result<Outcome, CliError> {
    let b: Vec<u32> = (0..=qmax).map(|q| betti(n, q as i64)).collect();
    if csv {
        let rows = b.iter().enumerate().map(|(q, &v)| DegreeRow { q: q as u64, value: v.into() });
        return Ok(Outcome::ok(to_csv(rows)?));
    }
    #[derive(Serialize)]
    struct Out {
        b: Vec<u32>,
    }
    Ok(Outcome::ok(to_json(&Out { b })))
}

fn series_cmd(n: u32, degree: u64, csv: bool) -> Result<Outcome, CliError> {
    let series = poincare_series_truncated(n, degree as usize);
    let coefficients = series.coefficients().to_vec();
    if csv {
        let rows = coefficients
            .iter()
            .enumerate()
            .map(|(q, &value)| DegreeRow { q: q as u64, value });
        return Ok(Outcome::ok(to_csv(rows)?));
    }
    #[derive(Serialize)]
    struct Out {
        n: u32,
        degree: u64,
        coefficients: Vec<i64>,
    }
    Ok(Outcome::ok(to_json(&Out { n, degree, coefficients })))
}

/// Either a bare list of models or `{"n": .., "models": [..]}`; only the
/// second form can describe an empty set.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSet {
    n: u32,
    models: Vec<GeodesicModel>,
}

fn read_models(path: &Path) -> Result<(u32, Vec<GeodesicModel>), CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('[') {
        let models: Vec<GeodesicModel> = parse_json(path, &text)?;
        let n = models.first().map(GeodesicModel::n).ok_or(MorseError::NoModels)?;
        if let Some(g) = models.iter().find(|g| g.n() != n) {
            return Err(MorseError::MixedDimensions(n, g.n()).into());
        }
        return Ok((n, models));
    }
    let set: ModelSet = parse_json(path, &text)?;
    if set.n < 2 {
        return Err(CliError::Invalid(format!("sphere dimension must be at least 2, got {}", set.n)));
    }
    if let Some((j, g)) = set.models.iter().enumerate().find(|(_, g)| g.n() != set.n) {
        return Err(CliError::Invalid(format!(
            "models[{j}] lives on S^{} but the set declares n = {}",
            g.n(),
            set.n
        )));
    }
    Ok((set.n, set.models))
}

#[derive(Serialize)]
struct MorseReport {
    n: u32,
    horizon: u64,
    morse: Vec<u64>,
    betti: Vec<u32>,
    violations: Vec<Violation>,
}

#[derive(Serialize)]
struct MorseRow {
    q: u64,
    morse: u64,
    betti: u32,
}

fn morse_check(path: &Path, horizon: u64, csv: bool) -> Result<Outcome, CliError> {
    let (n, models) = read_models(path)?;
    let table = morse_numbers(&models, horizon)?;
    let betti = BettiTable::new(n, horizon);
    let violations = check_morse_inequalities(&table, &betti, horizon)?;
    let stdout = if csv {
        to_csv((0..=horizon).map(|q| MorseRow { q, morse: table.get(q), betti: betti.get(q) }))?
    } else {
        to_json(&MorseReport {
            n,
            horizon,
            morse: table.values().to_vec(),
            betti: betti.values().to_vec(),
            violations: violations.clone(),
        })
    };
    if violations.is_empty() {
        Ok(Outcome::ok(stdout))
    } else {
        let first = &violations[0];
        let stderr = format!(
            "{} Morse inequality violation(s); first at q = {} ({:?}: {} < {})\n",
            violations.len(),
            first.q,
            first.kind,
            first.lhs,
            first.rhs
        );
        Ok(Outcome::failed(stdout, stderr))
    }
}

fn identity(path: &Path) -> Result<Outcome, CliError> {
    let (_, models) = read_models(path)?;
    let report = check_identity(&models)?;
    let stdout = to_json(&report);
    if report.holds {
        Ok(Outcome::ok(stdout))
    } else {
        let stderr = format!("identity fails: {} != {}\n", report.lhs, report.rhs);
        Ok(Outcome::failed(stdout, stderr))
    }
}

fn summary(cert: &Certificate) -> String {
    let mut out = String::new();
    for t in &cert.traces {
        let detail = serde_json::to_value(&t.verdict).expect("verdict serializes");
        out.push_str(&format!(
            "{}: {} ({})\n",
            t.label(),
            detail["status"].as_str().unwrap_or("?"),
            t.conclusion().unwrap_or("")
        ));
    }
    out
}

fn prove(n: u32, case: Option<NcgCase>, json: Option<&Path>) -> Result<Outcome, CliError> {
    let cert = certificate(n, case);
    let stdout = match json {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(&cert).expect("certificate serializes");
            text.push('\n');
            fs::write(path, text).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            })?;
            summary(&cert)
        }
        None => to_json(&cert),
    };
    if let Err(e) = verify_certificate(&cert) {
        return Ok(Outcome::failed(stdout, format!("verification failed: {e}\n")));
    }
    if !cert.all_resolved() {
        let open: Vec<String> = cert
            .traces
            .iter()
            .filter(|t| !t.verdict.is_resolved())
            .map(|t| t.label())
            .collect();
        return Ok(Outcome::failed(stdout, format!("unresolved: {}\n", open.join("; "))));
    }
    Ok(Outcome::ok(stdout))
}
