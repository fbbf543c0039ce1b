//! Command line front end: analyze stability exponents, evaluate the
//! closed-form double-point answers, cross-check them numerically, and run
//! parameter sweeps.

mod report;

use clap::{Args, Parser, Subcommand};
use opstable::closedform::{self, CriticalBeta, DimValue};
use opstable::numlab::{NumLabError, RadiiSchedule};
use opstable::spectral::{analyze_exponent, validate_exponent, CaseLabel, SpectralProfile};
use report::{build_report, render_human, Report, RunOptions};
use serde::Deserialize;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Exit codes: 1 validation (the input is outside the theory's domain),
/// 2 numeric failure, 3 inconclusive verdict.
const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "opstable", version, about = "Double points of symmetric operator stable Lévy processes", long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: spectral data, dimension, existence, critical exponent.
    Analyze(AnalyzeArgs),
    /// Print the Hausdorff dimension of the double-point set.
    Dim(InputArgs),
    /// Print the existence verdict for double points.
    Exists(InputArgs),
    /// Print the critical exponent of the pair-correlation integral.
    CriticalBeta(InputArgs),
    /// Analyze with the numerical cross-checks attached (same as
    /// `analyze --verify`).
    Verify(AnalyzeArgs),
    /// Closed-form sweep over a grid of sorted alpha tuples (case a).
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Machine-readable JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Write the existence-integral trace as CSV (m, block_sum, cumulative).
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Bisection tolerance for critical-exponent searches (>= 0.05).
    #[arg(long, default_value_t = 0.1)]
    tol: f64,
    /// Highest dyadic shell index for series sums (default 12 in 2D, 8 in 3D).
    #[arg(long, value_name = "N")]
    mmax: Option<u32>,
    /// Truncation radii as FIRST:DOUBLINGS (default 4:10).
    #[arg(long, value_name = "R0:N")]
    radii: Option<String>,
    /// Worker threads (0 = all cores; falls back to OPSTABLE_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the quasi-Monte Carlo estimators.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Quasi-Monte Carlo samples per nested box.
    #[arg(long, default_value_t = 1 << 20)]
    qmc_samples: u32,
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON file: {"matrix": [[...], ...]} or
    /// {"alphas": [...], "case": "a"}.
    input: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Attach numerical cross-checks (series bisection, existence integral,
    /// criterion integral).
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct SweepArgs {
    /// Ambient dimension (2 or 3).
    #[arg(long, value_name = "D")]
    dim: usize,
    /// Smallest alpha value on the grid.
    #[arg(long, default_value_t = 1.0)]
    min: f64,
    /// Largest alpha value on the grid.
    #[arg(long, default_value_t = 2.0)]
    max: f64,
    /// Grid step.
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    /// Write the CSV to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    matrix: Option<Vec<Vec<f64>>>,
    alphas: Option<Vec<f64>>,
    case: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(msg: impl ToString) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: msg.to_string(),
        }
    }
}

impl From<NumLabError> for CliError {
    fn from(e: NumLabError) -> Self {
        let code = match e {
            NumLabError::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            NumLabError::InvalidInput(_) => EXIT_VALIDATION,
            _ => EXIT_NUMERIC,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Command::Analyze(a) => cmd_analyze(a.input, a.verify, a.common),
        Command::Verify(a) => cmd_analyze(a.input, true, a.common),
        Command::Dim(a) => cmd_scalar(a, Scalar::Dim),
        Command::Exists(a) => cmd_scalar(a, Scalar::Exists),
        Command::CriticalBeta(a) => cmd_scalar(a, Scalar::CriticalBeta),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn load_profile(path: &PathBuf) -> Result<SpectralProfile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let input: InputFile = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("bad input JSON: {e}")))?;
    match (input.matrix, input.alphas) {
        (Some(matrix), None) => {
            let b = validate_exponent(&matrix).map_err(CliError::validation)?;
            analyze_exponent(&b).map_err(CliError::validation)
        }
        (None, Some(alphas)) => {
            let case = match input.case.as_deref() {
                _ if alphas.len() >= 4 => CaseLabel::HighDim,
                Some("a") => CaseLabel::A,
                Some("b") => CaseLabel::B,
                Some("c") => CaseLabel::C,
                Some("d") => CaseLabel::D,
                Some(other) => {
                    return Err(CliError::validation(format!(
                        "unknown case label {other:?}; expected a, b, c or d"
                    )))
                }
                None => {
                    return Err(CliError::validation(
                        "alpha input needs a \"case\" label (the matrix structure \
                         cannot be inferred from the alphas alone)",
                    ))
                }
            };
            SpectralProfile::from_alphas(&alphas, case).map_err(CliError::validation)
        }
        (Some(_), Some(_)) => Err(CliError::validation(
            "give either \"matrix\" or \"alphas\", not both",
        )),
        (None, None) => Err(CliError::validation(
            "input must contain \"matrix\" or \"alphas\"",
        )),
    }
}

fn run_options(common: &CommonOpts) -> Result<RunOptions, CliError> {
    let radii = match &common.radii {
        None => RadiiSchedule::new(4.0, 10).expect("default radii are valid"),
        Some(spec) => {
            let (first, doublings) = spec
                .split_once(':')
                .ok_or_else(|| CliError::validation("radii must look like R0:DOUBLINGS"))?;
            let first: f64 = first
                .parse()
                .map_err(|_| CliError::validation("bad radii start"))?;
            let doublings: u32 = doublings
                .parse()
                .map_err(|_| CliError::validation("bad radii doubling count"))?;
            RadiiSchedule::new(first, doublings)?
        }
    };
    let threads = common
        .threads
        .or_else(|| {
            std::env::var("OPSTABLE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    Ok(RunOptions {
        tol: common.tol,
        m_max: common.mmax,
        radii,
        threads,
        seed: common.seed,
        qmc_samples_per_box: common.qmc_samples,
    })
}

fn emit_report(report: &Report, common: &CommonOpts, elapsed_ms: u128) -> Result<(), CliError> {
    if let Some(path) = &common.csv {
        let trace = report
            .verification
            .as_ref()
            .map(|v| &v.existence_trace)
            .ok_or_else(|| {
                CliError::validation("--csv exports the existence trace; run with --verify")
            })?;
        let mut buf = Vec::new();
        trace
            .write_csv(&mut buf)
            .map_err(|e| CliError::validation(format!("cannot serialize CSV: {e}")))?;
        fs::write(path, buf)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
    }
    if common.json {
        // Wall time stays off the JSON so equal seeds give equal bytes.
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
        eprintln!("wall time: {elapsed_ms} ms");
    } else {
        print!("{}", render_human(report));
        println!("wall time: {elapsed_ms} ms");
    }
    Ok(())
}

fn cmd_analyze(input: PathBuf, verify: bool, common: CommonOpts) -> Result<(), CliError> {
    let profile = load_profile(&input)?;
    let opts = run_options(&common)?;
    let start = Instant::now();
    let report = build_report(profile, verify, &opts)?;
    emit_report(&report, &common, start.elapsed().as_millis())
}

enum Scalar {
    Dim,
    Exists,
    CriticalBeta,
}

fn cmd_scalar(args: InputArgs, what: Scalar) -> Result<(), CliError> {
    let profile = load_profile(&args.input)?;
    let report = closedform::dim_double_points(&profile);
    let (key, value) = match what {
        Scalar::Dim => (
            "dim",
            match report.dim_value {
                DimValue::Value(v) => v.to_string(),
                DimValue::Empty => "empty".into(),
            },
        ),
        Scalar::Exists => ("exists", report.exists.to_string()),
        Scalar::CriticalBeta => (
            "critical_beta",
            match report.critical_beta {
                CriticalBeta::Finite(b) => b.to_string(),
                CriticalBeta::Infinite => "infinite".into(),
            },
        ),
    };
    if args.common.json {
        println!("{{\"{key}\": \"{value}\"}}");
    } else {
        println!("{value}");
    }
    Ok(())
}

fn sweep_rows(dim: usize, min: f64, max: f64, step: f64) -> Result<Vec<Vec<f64>>, CliError> {
    if dim != 2 && dim != 3 {
        return Err(CliError::validation("sweep supports --dim 2 or 3"));
    }
    if !(step > 0.0) || !(max >= min) || min <= 0.0 || max > 2.0 + 1e-12 {
        return Err(CliError::validation(
            "need 0 < min <= max <= 2 and a positive step",
        ));
    }
    let mut axis = Vec::new();
    let mut v = min;
    while v <= max + 1e-9 {
        axis.push(v.min(2.0));
        v += step;
    }
    let mut rows = Vec::new();
    for &a1 in &axis {
        for &a2 in &axis {
            if a2 > a1 {
                continue;
            }
            if dim == 2 {
                rows.push(vec![a1, a2]);
            } else {
                for &a3 in &axis {
                    if a3 > a2 {
                        continue;
                    }
                    rows.push(vec![a1, a2, a3]);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::validation("empty grid"));
    }
    Ok(rows)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let rows = sweep_rows(args.dim, args.min, args.max, args.step)?;
    let mut out = String::new();
    let alpha_cols = (1..=args.dim)
        .map(|j| format!("alpha{j}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push_str(&format!("{alpha_cols},gamma,dim,exists,beta_star\n"));
    for alphas in rows {
        let profile =
            SpectralProfile::from_alphas(&alphas, CaseLabel::A).map_err(CliError::validation)?;
        let r = closedform::dim_double_points(&profile);
        let dim_str = match r.dim_value {
            DimValue::Value(v) => format!("{v}"),
            DimValue::Empty => "empty".into(),
        };
        let beta_str = match r.critical_beta {
            CriticalBeta::Finite(b) => format!("{b}"),
            CriticalBeta::Infinite => "inf".into(),
        };
        let avals = alphas
            .iter()
            .map(|a| format!("{a}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{avals},{},{dim_str},{},{beta_str}\n",
            r.gamma, r.exists
        ));
    }
    match args.csv {
        Some(path) => fs::write(&path, out)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    Ok(())
}
