//! Command-line front end: fit sequences, run risk experiments, run the
//! geometry checks, and emit machine-readable reports.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 input error, 3 oracle
//! mismatch, 4 convergence failure.

mod config;
mod errors;
mod io;

use clap::{Parser, Subcommand};
use errors::CliError;
use io::{csv_cell, emit_csv, emit_json, emit_sidecar, parse_sequence, read_input, RunManifest};
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;
use unireg::geometry::{slicing_check, statistical_dimension_mc, width_estimate, Region};
use unireg::oracle::{brute_monotone_projection, brute_unimodal_projection};
use unireg::risklab::{log_log_slope, run_experiment, RiskReport};
use unireg::rng::replication_rng;
use unireg::{pava, unimodal_lse, Direction};

#[derive(Parser)]
#[command(
    name = "unireg",
    version,
    about = "Unimodal and isotonic least squares with a risk lab and geometry bench"
)]
struct Cli {
    /// Worker threads for Monte Carlo replications. Affects speed only;
    /// results are identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a sequence read from a file or standard input.
    Fit(FitArgs),
    /// Run a Monte Carlo risk experiment from a flat key-value config.
    Simulate(SimulateArgs),
    /// Fit a log-log slope to a risk report CSV.
    Scaling(ScalingArgs),
    /// Verify the argmax identity of the sliced objective on a seeded
    /// instance.
    SlicingCheck(SlicingArgs),
    /// Monte Carlo localized-width curve over a radius grid.
    Width(WidthArgs),
    /// Monte Carlo statistical dimension of the monotone cone.
    Statdim(StatdimArgs),
}

#[derive(clap::Args)]
struct FitArgs {
    /// Input path; `-` or absent reads standard input. One numeric column
    /// (optional header) or whitespace-separated values.
    input: Option<PathBuf>,
    /// Monotone fit instead of unimodal: `up` or `down`.
    #[arg(long)]
    direction: Option<String>,
    /// Append the per-mode SSE column to the CSV (unimodal fits only).
    #[arg(long)]
    per_mode_sse: bool,
    /// Cross-check against the exhaustive reference and fail on mismatch.
    #[arg(long)]
    oracle: bool,
    /// Write the CSV here instead of stdout; the JSON summary lands in a
    /// `.json` sidecar (on stderr when printing to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Flat key-value config file.
    #[arg(long)]
    config: PathBuf,
    /// Write the report CSV here instead of stdout; the manifest lands in
    /// a `.json` sidecar (on stderr when printing to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ScalingArgs {
    /// Risk report CSV produced by `simulate`; `-` reads standard input.
    report: Option<PathBuf>,
    /// Write the slope JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SlicingArgs {
    /// Problem size (at most 8; the check is optimization-heavy).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Radius grid resolution.
    #[arg(long, default_value_t = 200)]
    grid_points: usize,
    /// Noise scale for the generated instance (0 allowed).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct WidthArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    replications: usize,
    #[arg(long, default_value_t = 20)]
    grid_points: usize,
    /// Largest radius; the grid is uniform over (0, t_max].
    /// Defaults to 2 sqrt(n).
    #[arg(long)]
    t_max: Option<f64>,
    /// `unimodal` or `mode=M` for a single cone slice.
    #[arg(long, default_value = "unimodal")]
    region: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StatdimArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    replications: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let started = Instant::now();
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args, started),
        Command::Simulate(args) => cmd_simulate(args, started),
        Command::Scaling(args) => cmd_scaling(args, started),
        Command::SlicingCheck(args) => cmd_slicing_check(args, started),
        Command::Width(args) => cmd_width(args, started),
        Command::Statdim(args) => cmd_statdim(args, started),
    };
    if let Err(err) = result {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}

fn normal_vec(seed: u64, n: usize, stream: u64) -> Vec<f64> {
    use rand_distr::Distribution;
    let mut rng = replication_rng(seed, n, stream);
    (0..n)
        .map(|_| rand_distr::StandardNormal.sample(&mut rng))
        .collect()
}

fn oracle_compare(got: &[f64], want: &[f64]) -> Result<(), CliError> {
    for (i, (a, b)) in got.iter().zip(want).enumerate() {
        if (a - b).abs() > 1e-9 {
            return Err(CliError::OracleMismatch(format!(
                "fitted[{i}] = {a} but the exhaustive reference gives {b}"
            )));
        }
    }
    Ok(())
}

fn cmd_fit(args: FitArgs, started: Instant) -> Result<(), CliError> {
    let y = parse_sequence(&read_input(args.input.as_deref())?)?;
    let direction = match args.direction.as_deref() {
        None => None,
        Some("up") => Some(Direction::Nondecreasing),
        Some("down") => Some(Direction::Nonincreasing),
        Some(other) => {
            return Err(CliError::Input(format!(
                "--direction must be `up` or `down`, got `{other}`"
            )))
        }
    };

    let mut header = vec!["index", "y", "fitted"];
    let (fitted, mode, sse, per_mode): (Vec<f64>, Option<usize>, f64, Option<Vec<f64>>) =
        match direction {
            Some(direction) => {
                if args.per_mode_sse {
                    return Err(CliError::Input(
                        "--per-mode-sse applies to unimodal fits only".to_string(),
                    ));
                }
                let fit = pava(&y, direction)?;
                if args.oracle {
                    let want = brute_monotone_projection(&y, direction)?;
                    oracle_compare(&fit.fitted, &want)?;
                }
                (fit.fitted, None, fit.sse, None)
            }
            None => {
                let fit = unimodal_lse(&y)?;
                if args.oracle {
                    let (want, want_mode, want_sse) = brute_unimodal_projection(&y)?;
                    oracle_compare(&fit.fitted, &want)?;
                    if fit.mode != want_mode || (fit.sse - want_sse).abs() > 1e-9 {
                        return Err(CliError::OracleMismatch(format!(
                            "mode/sse ({}, {}) vs reference ({want_mode}, {want_sse})",
                            fit.mode, fit.sse
                        )));
                    }
                }
                let curve = args.per_mode_sse.then(|| {
                    header.push("per_mode_sse");
                    fit.per_mode_sse.clone().expect("curve materialized")
                });
                (fit.fitted, Some(fit.mode), fit.sse, curve)
            }
        };

    let rows: Vec<Vec<String>> = y
        .iter()
        .enumerate()
        .map(|(i, value)| {
            let mut row = vec![(i + 1).to_string(), csv_cell(*value), csv_cell(fitted[i])];
            if let Some(curve) = &per_mode {
                row.push(csv_cell(curve[i]));
            }
            row
        })
        .collect();
    emit_csv(args.out.as_deref(), &header, &rows)?;

    let mut manifest = RunManifest::new(
        "fit",
        None,
        json!({
            "direction": args.direction,
            "per_mode_sse": args.per_mode_sse,
            "oracle": args.oracle,
        }),
    );
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_sidecar(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "n": y.len(),
            "mode": mode,
            "sse": sse,
        }),
    )
}

fn risk_report_rows(report: &RiskReport) -> Vec<Vec<String>> {
    report
        .rows
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                csv_cell(row.mse_mean),
                csv_cell(row.mse_std_err),
                csv_cell(row.thm1_ratio()),
                csv_cell(row.thm2_rhs),
                csv_cell(row.coverage_thm2),
                row.oracle_rhs.map(csv_cell).unwrap_or_default(),
            ]
        })
        .collect()
}

const REPORT_HEADER: [&str; 7] = [
    "n",
    "mse_mean",
    "mse_stderr",
    "thm1_ratio",
    "thm2_rhs",
    "coverage_thm2",
    "oracle_rhs",
];

fn cmd_simulate(args: SimulateArgs, started: Instant) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let experiment = config::parse_experiment_config(&text)?;
    let report = run_experiment(&experiment)?;
    emit_csv(
        args.out.as_deref(),
        &REPORT_HEADER,
        &risk_report_rows(&report),
    )?;

    let mut manifest = RunManifest::new(
        "simulate",
        Some(experiment.seed),
        serde_json::to_value(&experiment).expect("serializable config"),
    );
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_sidecar(args.out.as_deref(), &json!({ "manifest": manifest }))
}

fn cmd_scaling(args: ScalingArgs, started: Instant) -> Result<(), CliError> {
    let text = read_input(args.report.as_deref())?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::Input("empty report".to_string()))?
        .split(',')
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Input(format!("report is missing column `{name}`")))
    };
    let n_col = col("n")?;
    let mse_col = col("mse_mean")?;
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let parse = |idx: usize| -> Result<f64, CliError> {
            cells
                .get(idx)
                .and_then(|cell| cell.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Input(format!("line {}: malformed report row", lineno + 2))
                })
        };
        points.push((parse(n_col)?, parse(mse_col)?));
    }
    let fit = log_log_slope(&points)?;

    let mut manifest = RunManifest::new("scaling", None, json!({}));
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_json(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "slope": fit.slope,
            "stderr": fit.std_err,
            "n_points": fit.n_points,
        }),
    )
}

fn cmd_slicing_check(args: SlicingArgs, started: Instant) -> Result<(), CliError> {
    if args.n == 0 || args.n > 8 {
        return Err(CliError::Input(format!(
            "n = {} out of range 1..=8 (the check is optimization-heavy)",
            args.n
        )));
    }
    if !args.sigma.is_finite() || args.sigma < 0.0 {
        return Err(CliError::Input("sigma must be nonnegative".to_string()));
    }
    if args.grid_points < 2 {
        return Err(CliError::Input("need at least 2 grid points".to_string()));
    }
    // Truth: unimodal projection of one Gaussian stream; noise: the next.
    let truth = unimodal_lse(&normal_vec(args.seed, args.n, 0))?.fitted;
    let z: Vec<f64> = normal_vec(args.seed, args.n, 1)
        .into_iter()
        .map(|v| args.sigma * v)
        .collect();
    let y: Vec<f64> = truth.iter().zip(&z).map(|(a, b)| a + b).collect();
    let z_norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let hi = if z_norm > 0.0 { 2.0 * z_norm } else { 1.0 };
    let grid: Vec<f64> = (1..=args.grid_points)
        .map(|i| hi * i as f64 / args.grid_points as f64)
        .collect();

    let report = slicing_check(&y, &truth, &grid)?;
    let tolerance = 1e-3 * (1.0 + z_norm * z_norm);

    // Termination property: past the last nonnegative f the achieved
    // radius cannot lie more than one grid step away.
    let spacing = hi / args.grid_points as f64;
    let cutoff = report
        .f_grid
        .iter()
        .rposition(|&f| f >= 0.0)
        .map(|idx| report.grid[idx] + spacing);
    let termination_ok = cutoff
        .map(|t_star| report.achieved_radius < t_star + spacing)
        .unwrap_or(true);

    let mut manifest = RunManifest::new(
        "slicing-check",
        Some(args.seed),
        json!({ "n": args.n, "grid_points": args.grid_points, "sigma": args.sigma }),
    );
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_json(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "achieved_radius": report.achieved_radius,
            "f_at_achieved": report.f_at_achieved,
            "max_f_on_grid": report.max_f_on_grid,
            "identity_gap": report.identity_gap,
            "identity_tolerance": tolerance,
            "termination_ok": termination_ok,
        }),
    )?;
    if report.identity_gap > tolerance {
        return Err(CliError::Invariant(format!(
            "identity gap {} exceeds tolerance {tolerance}",
            report.identity_gap
        )));
    }
    if !termination_ok {
        return Err(CliError::Invariant(
            "achieved radius exceeds the negative-f cutoff".to_string(),
        ));
    }
    Ok(())
}

fn cmd_width(args: WidthArgs, started: Instant) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::Input("n must be at least 1".to_string()));
    }
    let region = parse_region(&args.region, args.n)?;
    let t_max = args.t_max.unwrap_or(2.0 * (args.n as f64).sqrt());
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Input("t_max must be positive".to_string()));
    }
    let grid: Vec<f64> = (1..=args.grid_points)
        .map(|i| t_max * i as f64 / args.grid_points as f64)
        .collect();
    let zeros = vec![0.0; args.n];
    let estimate = width_estimate(&zeros, region, &grid, args.replications, args.seed)?;

    let mut manifest = RunManifest::new(
        "width",
        Some(args.seed),
        json!({
            "n": args.n,
            "replications": args.replications,
            "grid_points": args.grid_points,
            "t_max": t_max,
            "region": args.region,
        }),
    );
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_json(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "t_grid": estimate.t_grid,
            "mean_sup": estimate.mean_sup,
            "std_err": estimate.std_err,
            "bound_curve": estimate.bound_curve,
            "replications": estimate.replications,
            "seed": estimate.seed,
        }),
    )
}

fn parse_region(text: &str, n: usize) -> Result<Region, CliError> {
    if text == "unimodal" {
        return Ok(Region::Unimodal);
    }
    if let Some(mode) = text.strip_prefix("mode=") {
        let mode: usize = mode
            .parse()
            .map_err(|_| CliError::Input(format!("bad mode in region `{text}`")))?;
        if mode < 1 || mode > n {
            return Err(CliError::Input(format!("mode {mode} out of range 1..={n}")));
        }
        return Ok(Region::ModeCone(mode));
    }
    Err(CliError::Input(format!(
        "region `{text}` is not `unimodal` or `mode=M`"
    )))
}

fn cmd_statdim(args: StatdimArgs, started: Instant) -> Result<(), CliError> {
    let report = statistical_dimension_mc(args.n, args.replications, args.seed)?;

    let mut manifest = RunManifest::new(
        "statdim",
        Some(args.seed),
        json!({ "n": args.n, "replications": args.replications }),
    );
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    emit_json(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "n": report.n,
            "replications": report.replications,
            "estimate": report.estimate,
            "std_err": report.std_err,
            "log_en_bound": report.log_en_bound,
            "pointwise_checked": report.pointwise_checked,
            "max_pointwise_gap": report.max_pointwise_gap,
        }),
    )?;
    if report.estimate > report.log_en_bound + 3.0 * report.std_err {
        return Err(CliError::Invariant(format!(
            "estimate {} exceeds log(en) bound {} by more than 3 standard errors",
            report.estimate, report.log_en_bound
        )));
    }
    if report.max_pointwise_gap > 1e-6 {
        return Err(CliError::Invariant(format!(
            "projection-norm identity gap {} exceeds 1e-6",
            report.max_pointwise_gap
        )));
    }
    Ok(())
}
