//! `tfdw` — solve the tempered fractional diffusion-wave equation, reproduce
//! its convergence table, dump discretization coefficients, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 runtime failure (including failed verification),
//! 2 usage error.

// Range checks are written as negated comparisons (`!(x > 0.0)`) so that NaN
// flag values fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod params;
mod verify;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

use output::{emit, fmt_f64, render_record, Artifacts};
use params::{load_config, Params};
use tfdw_core::analysis::{resolution_sample, ConvergenceReport, ResolutionSample};
use tfdw_core::kernels::{grunwald_coeffs, riesz_weights, tempered_coeffs};
use tfdw_core::problems::manufactured_problem;
use tfdw_core::solver::{solve, Discretization};

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Runtime(String),
}

impl From<tfdw_core::Error> for AppError {
    fn from(e: tfdw_core::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "tfdw",
    version,
    about = "Second-order solver for the space-time tempered fractional diffusion-wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single solve and emit the final field.
    Solve(SolveArgs),
    /// Run the h = tau convergence study and emit the error table.
    Converge(ConvergeArgs),
    /// Dump a coefficient table (tempered l_k, Riesz w_m, or Grünwald g_m).
    DumpCoeffs(DumpCoeffsArgs),
    /// Run the verification suites; exit 0 iff all pass.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProblemFlags {
    /// Problem name (available: manufactured).
    #[arg(long)]
    problem: Option<String>,
    /// Space order alpha in (1, 2].
    #[arg(long)]
    alpha: Option<f64>,
    /// Time order gamma in (1, 2].
    #[arg(long)]
    gamma: Option<f64>,
    /// Tempering rate lambda >= 0.
    #[arg(long)]
    lambda: Option<f64>,
    /// Final time T.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Spatial interval as "a,b".
    #[arg(long, value_parser = parse_domain)]
    domain: Option<[f64; 2]>,
    /// Seed recorded with the run (used by verify).
    #[arg(long)]
    seed: Option<u64>,
    /// Load parameters from a previously written JSON run record.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct OutputFlags {
    /// csv (default) or json on stdout; with --output-path both are written.
    #[arg(long = "output-format")]
    output_format: Option<String>,
    /// Stem for the output files: <stem>.csv and <stem>.json.
    #[arg(long = "output-path")]
    output_path: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    /// Spatial resolution: M subintervals, M - 1 interior points.
    #[arg(long)]
    m: Option<usize>,
    /// Number of time steps N (tau = T / N).
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    problem: ProblemFlags,
    /// Comma-separated list of resolutions R; each runs M = R, N = T*R/(b-a).
    /// The qualified Vec path keeps clap from treating this as a
    /// multi-occurrence flag; the whole list arrives as one value.
    #[arg(long, value_parser = parse_resolutions)]
    resolutions: Option<std::vec::Vec<usize>>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct DumpCoeffsArgs {
    /// Which table: tempered, riesz, or grunwald.
    #[arg(long)]
    kind: String,
    /// Quadrature order beta in (0, 1] (tempered, grunwald).
    #[arg(long)]
    beta: Option<f64>,
    /// Space order alpha in (1, 2] (riesz).
    #[arg(long)]
    alpha: Option<f64>,
    /// Tempering rate lambda >= 0 (tempered).
    #[arg(long)]
    lambda: Option<f64>,
    /// Time step tau > 0 (tempered).
    #[arg(long)]
    tau: Option<f64>,
    /// Number of coefficients.
    #[arg(long)]
    count: Option<usize>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// Base seed for the stability sweep.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_domain(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated numbers, e.g. 0,1".to_string());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| "invalid number")?;
    let b: f64 = parts[1].trim().parse().map_err(|_| "invalid number")?;
    Ok([a, b])
}

fn parse_resolutions(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid resolution '{p}'"))
        })
        .collect()
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Converge(args) => cmd_converge(args),
        Command::DumpCoeffs(args) => cmd_dump_coeffs(args),
        Command::Verify(args) => {
            return if verify::run(args.seed.unwrap_or(2024)) {
                0
            } else {
                1
            };
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Merge flags over defaults, or load a record; explicit parameter flags and
/// --config are mutually exclusive.
fn resolve_problem_params(
    subcommand: &str,
    flags: &ProblemFlags,
    extra_given: bool,
) -> Result<Params, AppError> {
    if let Some(config_path) = &flags.config {
        let any_flag = flags.problem.is_some()
            || flags.alpha.is_some()
            || flags.gamma.is_some()
            || flags.lambda.is_some()
            || flags.t_final.is_some()
            || flags.domain.is_some()
            || flags.seed.is_some()
            || extra_given;
        if any_flag {
            return Err(AppError::Usage(
                "--config replaces all parameter flags; pass only output options alongside it"
                    .to_string(),
            ));
        }
        let params = load_config(config_path)?;
        if params.subcommand != subcommand {
            return Err(AppError::Usage(format!(
                "--config: record was written by '{}', expected '{subcommand}'",
                params.subcommand
            )));
        }
        return Ok(params);
    }
    let mut params = Params::base(subcommand);
    if let Some(v) = &flags.problem {
        params.problem = v.clone();
    }
    if let Some(v) = flags.alpha {
        params.alpha = v;
    }
    if let Some(v) = flags.gamma {
        params.gamma = v;
    }
    if let Some(v) = flags.lambda {
        params.lambda = v;
    }
    if let Some(v) = flags.t_final {
        params.t_final = v;
    }
    if let Some(v) = flags.domain {
        params.domain = v;
    }
    if let Some(v) = flags.seed {
        params.seed = v;
    }
    Ok(params)
}

fn build_problem(params: &Params) -> Result<tfdw_core::problems::ProblemSpec, AppError> {
    let mut problem = manufactured_problem(params.alpha, params.gamma, params.lambda)?;
    problem.horizon = params.t_final;
    Ok(problem)
}

#[derive(Serialize)]
struct FieldRow {
    x: f64,
    u: f64,
}

fn cmd_solve(args: SolveArgs) -> Result<(), AppError> {
    let start = Instant::now();
    let mut params =
        resolve_problem_params("solve", &args.problem, args.m.is_some() || args.n.is_some())?;
    if let Some(m) = args.m {
        params.m = m;
    }
    if let Some(n) = args.n {
        params.n = n;
    }
    if let Some(f) = &args.output.output_format {
        params.output_format = f.clone();
    }
    params.validate()?;

    let problem = build_problem(&params)?;
    let disc = Discretization::new(&problem, params.m, params.n)?;
    let result = solve(&problem, &disc)?;

    // Full field including the homogeneous boundary nodes.
    let mut rows = Vec::with_capacity(params.m + 1);
    rows.push(FieldRow {
        x: disc.node(0),
        u: 0.0,
    });
    for (i, &u) in result.u.iter().enumerate() {
        rows.push(FieldRow {
            x: disc.node(i + 1),
            u,
        });
    }
    rows.push(FieldRow {
        x: disc.node(params.m),
        u: 0.0,
    });

    let mut csv = String::from("x,u\n");
    for row in &rows {
        csv.push_str(&format!("{},{}\n", fmt_f64(row.x), fmt_f64(row.u)));
    }
    let artifacts = Artifacts {
        csv,
        record_json: render_record(&params, &rows, start.elapsed().as_millis() as u64)?,
    };
    emit(
        &artifacts,
        args.output.output_path.as_deref(),
        &params.output_format,
    )
}

#[derive(Serialize)]
struct ConvergenceJsonRow {
    tau: f64,
    h: f64,
    max_error: f64,
    all_time_max_error: f64,
    l2_error: f64,
    rate: Option<f64>,
}

fn cmd_converge(args: ConvergeArgs) -> Result<(), AppError> {
    let start = Instant::now();
    let mut params = resolve_problem_params("converge", &args.problem, args.resolutions.is_some())?;
    if let Some(r) = &args.resolutions {
        params.resolutions = r.clone();
    }
    if let Some(f) = &args.output.output_format {
        params.output_format = f.clone();
    }
    params.validate()?;

    let problem = build_problem(&params)?;
    let pairs: Vec<(usize, usize)> = params
        .resolutions
        .iter()
        .map(|&r| Ok((r, params.steps_for_resolution(r)?)))
        .collect::<Result<_, AppError>>()?;

    // One solve per resolution, fanned out across threads; rows are
    // reassembled in resolution order, so the output is thread-count
    // independent.
    let samples: Vec<ResolutionSample> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(m, n)| {
                let problem = &problem;
                scope.spawn(move || resolution_sample(problem, m, n))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let report = ConvergenceReport::from_samples(samples.clone());

    let mut csv = String::from("tau,h,max_error,rate\n");
    for row in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(row.tau),
            fmt_f64(row.h),
            fmt_f64(row.max_error),
            row.rate.map(fmt_f64).unwrap_or_default()
        ));
    }
    let rows: Vec<ConvergenceJsonRow> = report
        .rows
        .iter()
        .map(|r| {
            let l2 = samples
                .iter()
                .find(|s| s.tau == r.tau)
                .map(|s| s.l2_error)
                .unwrap_or(f64::NAN);
            ConvergenceJsonRow {
                tau: r.tau,
                h: r.h,
                max_error: r.max_error,
                all_time_max_error: r.all_time_max_error,
                l2_error: l2,
                rate: r.rate,
            }
        })
        .collect();
    let artifacts = Artifacts {
        csv,
        record_json: render_record(&params, &rows, start.elapsed().as_millis() as u64)?,
    };
    emit(
        &artifacts,
        args.output.output_path.as_deref(),
        &params.output_format,
    )
}

#[derive(Serialize)]
struct CoeffRow {
    index: usize,
    value: f64,
}

fn cmd_dump_coeffs(args: DumpCoeffsArgs) -> Result<(), AppError> {
    let start = Instant::now();
    let mut params = Params::base("dump-coeffs");
    params.kind = Some(args.kind.clone());
    params.beta = Some(args.beta.unwrap_or(1.0));
    params.alpha = args.alpha.unwrap_or(params::DEFAULT_ALPHA);
    params.lambda = args.lambda.unwrap_or(0.0);
    params.tau = Some(args.tau.unwrap_or(0.025));
    params.count = Some(args.count.unwrap_or(16));
    if let Some(f) = &args.output.output_format {
        params.output_format = f.clone();
    }
    params::check_output_format(&params.output_format)?;

    let count = params.count.unwrap();
    if count == 0 {
        return Err(AppError::Usage("--count: must be >= 1".to_string()));
    }
    let (header, values): (&str, Vec<f64>) = match args.kind.as_str() {
        "tempered" => {
            let beta = params.beta.unwrap();
            if !(beta > 0.0 && beta <= 1.0) {
                return Err(AppError::Usage(format!(
                    "--beta: {beta} must lie in (0, 1]"
                )));
            }
            if !(params.lambda >= 0.0) {
                return Err(AppError::Usage(format!(
                    "--lambda: {} must be >= 0",
                    params.lambda
                )));
            }
            let tau = params.tau.unwrap();
            if !(tau > 0.0) {
                return Err(AppError::Usage(format!("--tau: {tau} must be > 0")));
            }
            ("k,l_k", tempered_coeffs(beta, params.lambda, tau, count)?.l)
        }
        "riesz" => {
            if !(params.alpha > 1.0 && params.alpha <= 2.0) {
                return Err(AppError::Usage(format!(
                    "--alpha: {} must lie in (1, 2]",
                    params.alpha
                )));
            }
            if count < 4 {
                return Err(AppError::Usage(
                    "--count: riesz stencil needs at least 4 weights".to_string(),
                ));
            }
            ("m,w_m", riesz_weights(params.alpha, count)?.weights)
        }
        "grunwald" => ("m,g_m", grunwald_coeffs(params.beta.unwrap(), count)?.g),
        other => {
            return Err(AppError::Usage(format!(
                "--kind: unknown kind '{other}' (available: tempered, riesz, grunwald)"
            )))
        }
    };

    let rows: Vec<CoeffRow> = values
        .iter()
        .enumerate()
        .map(|(index, &value)| CoeffRow { index, value })
        .collect();
    let mut csv = format!("{header}\n");
    for row in &rows {
        csv.push_str(&format!("{},{}\n", row.index, fmt_f64(row.value)));
    }
    let artifacts = Artifacts {
        csv,
        record_json: render_record(&params, &rows, start.elapsed().as_millis() as u64)?,
    };
    emit(
        &artifacts,
        args.output.output_path.as_deref(),
        &params.output_format,
    )
}
