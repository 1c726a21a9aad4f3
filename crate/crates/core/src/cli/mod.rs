//! The `qpi` command line: `check`, `compile`, `equiv`, `laws` and `run` over `.qpi` files.
//!
//! Exit codes: 0 on success, 1 when a law or equivalence fails, 2 on usage,
//! parse, type or evaluation errors.

pub mod lower;
pub mod syntax;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::laws::{channel_equiv, equiv, random_property_suite, run_suite, LawError, LawReport};
use crate::linalg::CMatrix;
use crate::measure::{compile, sample, ChannelTerm, Gate, MeasureError};
use crate::qpi::eval_qpi;
use crate::unitary::{EvalError, Phi};

pub use lower::{check_definition, check_file, lower, CheckError, Checked};
pub use syntax::{parse, parse_term, parse_type, ParseError, SourceFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}:{source}")]
    Check { path: String, source: CheckError },
    #[error("no definition named `{0}`")]
    NoSuchName(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Law(#[from] LawError),
}

/// Accepts decimal radians, `pi`, `pi/n`, `k*pi` and `k*pi/n`.
pub fn parse_phi(s: &str) -> Result<Phi, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(Phi(v)) } else { Err(format!("angle `{s}` is not finite")) };
    }
    let bad = || format!("cannot read `{s}` as an angle; use radians or forms like pi/8, 3*pi/8");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let k = match num.strip_suffix("pi").map(str::trim) {
        Some("") => 1.0,
        Some(k) => k.strip_suffix('*').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(Phi(k * std::f64::consts::PI / den))
}

#[derive(Debug, Parser)]
#[command(name = "qpi", version, about = "Typecheck, evaluate and verify QΠ programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and typecheck every definition in a file.
    Check { file: PathBuf },
    /// Print the matrix (or Kraus operators) of a definition.
    Compile {
        file: PathBuf,
        name: String,
        #[arg(long, default_value = "pi/8", value_parser = parse_phi)]
        phi: Phi,
        #[arg(long)]
        json: bool,
    },
    /// Compare two definitions semantically.
    Equiv {
        file: PathBuf,
        name1: String,
        name2: String,
        #[arg(long, default_value = "pi/8", value_parser = parse_phi)]
        phi: Phi,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the named law suite and the randomized property suite.
    Laws {
        #[arg(long, default_value = "pi/8", value_parser = parse_phi)]
        phi: Phi,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per layer.
        #[arg(long, default_value_t = 500)]
        count: usize,
        /// One JSON object per law instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Sample the measured output of a definition.
    Run {
        file: PathBuf,
        name: String,
        #[arg(long, default_value = "pi/8", value_parser = parse_phi)]
        phi: Phi,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Index of the computational basis input.
        #[arg(long, default_value_t = 0)]
        input: usize,
        /// Sample unmeasured programs and skip the totality check before hiding.
        #[arg(long = "unsafe")]
        unsafe_: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn load(path: &Path) -> Result<SourceFile, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    parse(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn checked(path: &Path, file: &SourceFile, name: &str) -> Result<Checked, CliError> {
    let def = file.get(name).ok_or_else(|| CliError::NoSuchName(name.to_string()))?;
    check_definition(file, def).map_err(|source| CliError::Check { path: path.display().to_string(), source })
}

#[derive(Serialize)]
struct CompileOutput<'a> {
    name: &'a str,
    phi: f64,
    domain: String,
    codomain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<CMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kraus: Option<Vec<CMatrix>>,
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

/// Runs one command, writing results to `out`; returns the exit code.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Check { file: path } => {
            let file = load(path)?;
            let mut first_error = None;
            for result in check_file(&file) {
                match result {
                    Ok(c) => writeln!(out, "{} : {} ~> {}", c.name, c.domain, c.codomain).map_err(io)?,
                    Err(e) => {
                        first_error.get_or_insert(CliError::Check { path: path.display().to_string(), source: e });
                    }
                }
            }
            match first_error {
                Some(e) => Err(e),
                None => Ok(EXIT_OK),
            }
        }
        Command::Compile { file: path, name, phi, json } => {
            let file = load(path)?;
            let c = checked(path, &file, name)?;
            let (matrix, kraus) = match c.term.as_pure() {
                Some(d) => (Some(eval_qpi(*phi, d, &c.domain)?), None),
                None => (None, Some(compile(*phi, &c.term, &c.domain, Gate::Checked)?.0.operators().to_vec())),
            };
            if *json {
                let report = CompileOutput { name, phi: phi.0, domain: c.domain.to_string(), codomain: c.codomain.to_string(), matrix, kraus };
                writeln!(out, "{}", serde_json::to_string(&report).expect("plain data serializes")).map_err(io)?;
            } else {
                writeln!(out, "{name} : {} ~> {}  at φ = {phi}", c.domain, c.codomain).map_err(io)?;
                if let Some(m) = matrix {
                    write!(out, "{m}").map_err(io)?;
                }
                for (i, k) in kraus.into_iter().flatten().enumerate() {
                    writeln!(out, "K{i} =").map_err(io)?;
                    write!(out, "{k}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Equiv { file: path, name1, name2, phi, tol } => {
            let file = load(path)?;
            let a = checked(path, &file, name1)?;
            let b = checked(path, &file, name2)?;
            let label = format!("{name1} = {name2}");
            let mut report = match (a.term.as_pure(), b.term.as_pure()) {
                (Some(d1), Some(d2)) => equiv(*phi, d1, d2, &a.domain, *tol)?,
                _ => channel_equiv(&label, *phi, &a.term, &b.term, &a.domain, *tol)?,
            };
            report.law_name = label;
            writeln!(out, "{}", report.to_json()).map_err(io)?;
            Ok(if report.holds { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Laws { phi, seed, count, json } => {
            let mut reports = run_suite(*phi);
            reports.extend(random_property_suite(*phi, *count, *seed));
            write_reports(out, &reports, *json).map_err(io)?;
            Ok(if reports.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Run { file: path, name, phi, shots, seed, input, unsafe_ } => {
            let file = load(path)?;
            let c = checked(path, &file, name)?;
            if matches!(c.term, ChannelTerm::Pure(_)) && !unsafe_ {
                return Err(CliError::Usage(format!(
                    "`{name}` does not measure its output; end it in a measurement or pass --unsafe to sample amplitudes directly"
                )));
            }
            let gate = if *unsafe_ { Gate::Unsafe } else { Gate::Checked };
            let report = sample(*phi, &c.term, &c.domain, *input, *shots, *seed, gate)?;
            writeln!(out, "{}", report.to_json()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn write_reports(out: &mut dyn Write, reports: &[LawReport], json: bool) -> std::io::Result<()> {
    if json {
        for r in reports {
            writeln!(out, "{}", r.to_json())?;
        }
        return Ok(());
    }
    let width = reports.iter().map(|r| r.law_name.len()).max().unwrap_or(0);
    writeln!(out, "{:width$}  {:>8}  {:>12}  status", "law", "phi", "deviation")?;
    for r in reports {
        let status = if r.holds { "ok" } else { "FAILED" };
        writeln!(out, "{:width$}  {:>8.5}  {:>12.3e}  {status}", r.law_name, r.phi, r.max_deviation)?;
    }
    let failed = reports.iter().filter(|r| !r.holds).count();
    writeln!(out, "{} laws checked, {failed} failed", reports.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_phi("pi/8").unwrap(), Phi(PI / 8.0));
        assert_eq!(parse_phi("3*pi/8").unwrap(), Phi(3.0 * PI / 8.0));
        assert_eq!(parse_phi("pi").unwrap(), Phi(PI));
        assert_eq!(parse_phi("0.5").unwrap(), Phi(0.5));
        assert!(parse_phi("pie").is_err());
        assert!(parse_phi("pi/0").is_err());
        assert!(parse_phi("x*pi").is_err());
    }

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("qpi").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_ERROR);
        assert_eq!(run(&["laws", "--phi", "nonsense"]).0, EXIT_ERROR);
        let (code, _, err) = run(&["check", "/nonexistent.qpi"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("nonexistent"));
    }

    #[test]
    fn laws_exit_codes() {
        assert_eq!(run(&["laws", "--count", "5"]).0, EXIT_OK);
        let (code, out, _) = run(&["laws", "--phi", "pi/6", "--count", "5", "--json"]);
        assert_eq!(code, EXIT_FAILED);
        assert!(out.lines().all(|l| l.starts_with("{\"law_name\"")));
    }
}
