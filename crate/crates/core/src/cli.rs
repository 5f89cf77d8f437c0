//! Command-line front end. Machine-readable output goes to stdout,
//! diagnostics to stderr.
//!
//! Exit status: 0 on success, 1 when a table row mismatches or a check
//! fails, 2 on usage or evaluation errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::checks::{self, decades};
use crate::expression::{parse_spec, ParseError};
use crate::inequality::{EvalError, Evaluator, Family};
use crate::prime_engine::{
    PrimeCountCache, PrimeCounter, PrimeError, DEFAULT_PI_CAP, DEFAULT_PSI_CAP, DEFAULT_SIEVE_LIMIT,
};
use crate::repro::{self, OutputFormat, ReproError, TableId};
use crate::scanner::{self, GridKind, ScanError};

/// Environment variable naming the cache file when no flag or config sets it.
pub const CACHE_ENV: &str = "PIPOLY_CACHE";
/// Largest table row computed when `--cap` is not given.
pub const DEFAULT_TABLE_CAP: f64 = 1e10;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Repro(#[from] ReproError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Run settings; file values are overridden by flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub cache_path: Option<PathBuf>,
    pub pi_cap: u64,
    pub psi_cap: u64,
    pub tolerance: f64,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_path: None,
            pi_cap: DEFAULT_PI_CAP,
            psi_cap: DEFAULT_PSI_CAP,
            tolerance: DEFAULT_TOLERANCE,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl Config {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Config(format!("line {}: {msg}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "cache_path" | "cache" => self.cache_path = Some(PathBuf::from(value)),
                "pi_cap" => self.pi_cap = parse_count(value).map_err(bad)?,
                "psi_cap" => self.psi_cap = parse_count(value).map_err(bad)?,
                "tolerance" => self.tolerance = parse_real(value).map_err(bad)?,
                "threads" => self.threads = parse_count(value).map_err(bad)? as usize,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = Config::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.pi_cap == 0 || self.psi_cap == 0 {
            return Err(CliError::Config("caps must be positive".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::Config(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.threads == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Decimal or scientific real, e.g. `1e4` or `12345.5`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a real number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

/// Non-negative integer written in decimal or scientific notation.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let v = parse_real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v >= u64::MAX as f64 {
        return Err(format!("{s:?} is not a non-negative integer"));
    }
    Ok(v as u64)
}

fn parse_small(s: &str) -> Result<u32, String> {
    let v = parse_count(s)?;
    u32::try_from(v).map_err(|_| format!("{s:?} is too large"))
}

#[derive(Debug, Parser)]
#[command(
    name = "pipoly",
    version,
    about = "Exact prime counting and prime-power inequality workbench"
)]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Prime-count cache file (falls back to $PIPOLY_CACHE).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Largest argument accepted by π.
    #[arg(long, global = true, value_parser = parse_count)]
    pi_cap: Option<u64>,
    /// Largest argument accepted by ψ and θ.
    #[arg(long, global = true, value_parser = parse_count)]
    psi_cap: Option<u64>,
    /// Relative tolerance for table comparisons.
    #[arg(long, global = true, value_parser = parse_real)]
    tolerance: Option<f64>,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, value_parser = parse_count)]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// G, H, K, L, F, Hn, Nr or hassani.
    #[arg(long)]
    family: Option<String>,
    /// Expression in the inequality DSL.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// File holding one DSL expression.
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Params {
    /// Sum length or power index.
    #[arg(long, value_parser = parse_small)]
    n: Option<u32>,
    /// Degree of Nr.
    #[arg(long, value_parser = parse_small)]
    r: Option<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Grid {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Psi,
    Residual,
    Maintermtrend,
    Cosign,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// π(floor(x)).
    Pi {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        x: f64,
    },
    /// ψ(x), θ(x) and the number of prime powers up to x.
    Psi {
        #[arg(long, value_parser = parse_count)]
        x: u64,
    },
    /// Evaluate a family or a DSL expression at one point.
    Eval {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        x: f64,
        /// Also print the term breakdown.
        #[arg(long)]
        terms: bool,
    },
    /// Signs, crossings and monotonicity over a grid, as CSV.
    Scan {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_parser = parse_real)]
        from: f64,
        #[arg(long, value_parser = parse_real)]
        to: f64,
        #[arg(long, value_parser = parse_count)]
        points: u64,
        #[arg(long, value_enum, default_value = "log")]
        grid: Grid,
    },
    /// Reproduce a reference table (1, 2, 3, 4, 5 or 7).
    Table {
        #[arg(long)]
        id: String,
        /// Skip rows above this x (default 1e10).
        #[arg(long, value_parser = parse_real)]
        cap: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Sum length for tables 3, 4 and 5.
        #[arg(long, value_parser = parse_small)]
        n: Option<u32>,
    },
    /// Plot samples over [2e4, 1e5] for figure 1..=8, as CSV.
    Figure {
        #[arg(long, value_parser = parse_small)]
        id: u32,
        #[arg(long, value_parser = parse_count, default_value = "100")]
        points: u64,
    },
    /// Run an empirical property suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

fn target_family(target: &Target, params: &Params) -> Result<Family, CliError> {
    if let Some(name) = &target.family {
        return Ok(Family::from_name(name, params.n, params.r)?);
    }
    let text = match (&target.expr, &target.spec_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        (None, None) => unreachable!("clap enforces one target"),
    };
    Ok(Family::General {
        spec: Arc::new(parse_spec(text.trim_end_matches(['\n', '\r']))?),
        n: params.n,
    })
}

struct Outcome {
    stdout: String,
    stderr: String,
    status: i32,
}

/// Parses `args` (program name first), runs the command and writes its
/// output; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_ERROR };
        }
    };
    let outcome = execute(cli).unwrap_or_else(|e| Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        status: EXIT_ERROR,
    });
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    outcome.status
}

fn resolve_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(p) = &cli.cache {
        config.cache_path = Some(p.clone());
    } else if config.cache_path.is_none() {
        config.cache_path = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    }
    if let Some(v) = cli.pi_cap {
        config.pi_cap = v;
    }
    if let Some(v) = cli.psi_cap {
        config.psi_cap = v;
    }
    if let Some(v) = cli.tolerance {
        config.tolerance = v;
    }
    if let Some(v) = cli.threads {
        config.threads = v as usize;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: Cli) -> Result<Outcome, CliError> {
    let config = resolve_config(&cli)?;
    let mut counter = PrimeCounter::with_limits(
        DEFAULT_SIEVE_LIMIT.min(config.pi_cap.max(2)),
        config.pi_cap,
        config.psi_cap,
    );
    if let Some(path) = &config.cache_path {
        counter = counter.with_cache(PrimeCountCache::open(path)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = pool.install(|| dispatch(&cli.command, &config, &counter))?;
    counter.cache().save()?;
    Ok(outcome)
}

fn dispatch(
    command: &Command,
    config: &Config,
    counter: &PrimeCounter,
) -> Result<Outcome, CliError> {
    let ev = Evaluator::new(counter);
    let mut out = String::new();
    let mut err = String::new();
    let mut status = EXIT_OK;
    match command {
        Command::Pi { x } => {
            writeln!(out, "{}", counter.prime_count(*x)?).unwrap();
        }
        Command::Psi { x } => {
            let c = counter.chebyshev(*x)?;
            writeln!(out, "x,psi,theta,term_count").unwrap();
            writeln!(out, "{},{},{},{}", c.x, c.psi, c.theta, c.term_count).unwrap();
        }
        Command::Eval {
            target,
            params,
            x,
            terms,
        } => {
            let family = target_family(target, params)?;
            let result = ev.eval(&family, *x)?;
            writeln!(out, "{}", result.value).unwrap();
            if *terms {
                writeln!(out, "sign = {}", result.sign).unwrap();
                for (i, (label, v)) in result.terms.iter().enumerate() {
                    let op = if i % 2 == 0 { '+' } else { '-' };
                    writeln!(out, "{op} {label} = {v}").unwrap();
                }
                if family == Family::Hassani {
                    let h = ev.eval_hassani(*x)?;
                    writeln!(out, "lower = {}", h.lower).unwrap();
                    writeln!(out, "middle = {}", h.middle).unwrap();
                    writeln!(out, "upper = {}", h.upper).unwrap();
                    writeln!(out, "lower < middle: {}", h.holds.0).unwrap();
                    writeln!(out, "middle < upper: {}", h.holds.1).unwrap();
                }
            }
        }
        Command::Scan {
            target,
            params,
            from,
            to,
            points,
            grid,
        } => {
            let family = target_family(target, params)?;
            let kind = match grid {
                Grid::Log => GridKind::Log,
                Grid::Linear => GridKind::Linear,
            };
            let report = scanner::scan(&ev, &family, *from, *to, *points as usize, kind)?;
            out.push_str(&report.to_csv());
            writeln!(err, "scan finished in {} ms", report.runtime_ms).unwrap();
        }
        Command::Table { id, cap, format, n } => {
            let id: TableId = id.parse()?;
            let cap = cap.unwrap_or(DEFAULT_TABLE_CAP);
            if cap > config.pi_cap as f64 {
                return Err(PrimeError::AboveCap {
                    value: cap as u64,
                    cap: config.pi_cap,
                }
                .into());
            }
            let tol = config.tolerance;
            let report = repro::reproduce_table_with_n(
                &ev,
                id,
                n.unwrap_or(repro::DEFAULT_TABLE_N),
                cap,
                tol,
            )?;
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Markdown => OutputFormat::Markdown,
            };
            out.push_str(&repro::emit(&report.rows, format));
            for line in report.diagnostics() {
                writeln!(err, "{line}").unwrap();
            }
            if !report.all_computed_match() {
                writeln!(
                    err,
                    "{} row(s) mismatch at tolerance {tol:e}",
                    report.mismatches()
                )
                .unwrap();
                status = EXIT_MISMATCH;
            }
        }
        Command::Figure { id, points } => {
            let samples = repro::figure_data(&ev, *id, *points as usize)?;
            out.push_str(&repro::figure_csv(&samples));
        }
        Command::Check { suite } => {
            let report = match suite {
                Suite::Psi => {
                    let xs = capped(decades(3, 9), config.psi_cap);
                    checks::psi_suite(counter, &xs)?
                }
                Suite::Residual => {
                    let xs = capped(decades(3, 9), config.psi_cap.min(config.pi_cap));
                    checks::residual_suite(counter, &xs)?
                }
                Suite::Maintermtrend => {
                    let grid: Vec<f64> = capped(decades(4, 10), config.pi_cap)
                        .into_iter()
                        .map(|x| x as f64)
                        .collect();
                    checks::main_term_suite(&ev, &checks::main_term_families(), &grid)?
                }
                Suite::Cosign => {
                    let grid: Vec<f64> = capped(decades(4, 10), config.pi_cap)
                        .into_iter()
                        .map(|x| x as f64)
                        .collect();
                    checks::cosign_suite(&ev, &grid)?
                }
            };
            out.push_str(&report.render());
            if !report.passed() {
                status = EXIT_MISMATCH;
            }
        }
    }
    Ok(Outcome {
        stdout: out,
        stderr: err,
        status,
    })
}

fn capped(xs: Vec<f64>, cap: u64) -> Vec<u64> {
    xs.into_iter()
        .map(|x| x as u64)
        .filter(|&x| x <= cap)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("pipoly").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn pi_and_eval() {
        assert_eq!(
            run_args(&["pi", "--x", "10000"]),
            (0, "1229\n".into(), String::new())
        );
        let (code, out, _) = run_args(&["eval", "--family", "H", "--x", "1e4"]);
        assert_eq!(code, 0);
        let v: crate::numerics::ExtFloat = out.trim().parse().unwrap();
        let expected: crate::numerics::ExtFloat = "-4.822952515086e8".parse().unwrap();
        assert!(v.rel_error(&expected).unwrap() < 1e-6);
    }

    #[test]
    fn eval_expr_and_terms() {
        let (code, out, _) = run_args(&["eval", "--expr", "x - 3", "--x", "10"]);
        assert_eq!((code, out.as_str()), (0, "7e0\n"));
        let (code, out, _) = run_args(&["eval", "--family", "G", "--x", "100", "--terms"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        assert!(out.contains("+ pi(x)^2 = 6.25e2"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["bogus"]).0, EXIT_ERROR);
        assert_eq!(run_args(&["eval", "--x", "10"]).0, EXIT_ERROR);
        assert_eq!(
            run_args(&["eval", "--family", "H", "--expr", "x", "--x", "10"]).0,
            EXIT_ERROR
        );
        let (code, _, err) = run_args(&["eval", "--expr", "pi(x^", "--x", "10"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("column 6"), "{err}");
        let (code, _, err) = run_args(&["eval", "--family", "L", "--x", "1e4"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("parameter n"), "{err}");
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn table_exit_codes() {
        let (code, out, _) = run_args(&["table", "--id", "1", "--cap", "1e6", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.ends_with(",match")).count(), 3);
        let (code, _, err) = run_args(&["table", "--id", "4", "--cap", "1e5", "--n", "3"]);
        assert_eq!(code, EXIT_MISMATCH);
        assert!(err.contains("n-scan"), "{err}");
    }

    #[test]
    fn config_text() {
        let mut c = Config::default();
        c.apply_text(
            "# comment\npi_cap = 1e9\ntolerance=1e-4\nthreads = 2\ncache_path = /tmp/x.bin\n",
        )
        .unwrap();
        assert_eq!((c.pi_cap, c.tolerance, c.threads), (1_000_000_000, 1e-4, 2));
        assert_eq!(c.cache_path, Some(PathBuf::from("/tmp/x.bin")));
        assert!(c.apply_text("bogus = 1").is_err());
        assert!(c.apply_text("pi_cap = 1.5").is_err());
        c.tolerance = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn real_parsers() {
        assert_eq!(parse_real("1e4"), Ok(1e4));
        assert_eq!(parse_count("1e13"), Ok(10_000_000_000_000));
        assert!(parse_count("-1").is_err());
        assert!(parse_real("nan").is_err());
    }
}
