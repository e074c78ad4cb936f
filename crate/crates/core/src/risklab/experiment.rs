//! The repeated-fit risk experiment.

use crate::error::Error;
use crate::risklab::bounds::{thm1_dominant_term, thm2_rhs};
use crate::risklab::noise::{generate_noise, NoiseSpec};
use crate::risklab::segment::oracle_rhs_unimodal;
use crate::risklab::signal::{generate_signal, SignalSpec};
use crate::rng::replication_rng;
use crate::unimodal::unimodal_lse_no_curve;
use crate::util::mean_and_std_err;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A declarative Monte Carlo study: fit the estimator `replications` times
/// at each length in `n_grid` and compare against the closed-form bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub signal: SignalSpec,
    pub noise: NoiseSpec,
    pub alpha: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_grid.is_empty() {
            return Err(Error::invalid("n_grid must be nonempty"));
        }
        for pair in self.n_grid.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::invalid("n_grid must be strictly increasing"));
            }
        }
        if self.n_grid[0] < 2 {
            return Err(Error::invalid("every n must be at least 2"));
        }
        if self.replications == 0 {
            return Err(Error::invalid("replications must be positive"));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::invalid(format!(
                "alpha {} must be positive",
                self.alpha
            )));
        }
        self.noise.validate()
    }
}

/// Per-length results of a risk experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RiskRow {
    pub n: usize,
    pub s1: usize,
    pub s2: usize,
    /// Signal range, max - min.
    pub v: f64,
    /// Mean of the per-coordinate squared error over replications.
    pub mse_mean: f64,
    pub mse_std_err: f64,
    /// Dominant worst-case term with its universal constant factored out.
    pub thm1_rhs_over_c: f64,
    pub thm2_rhs: f64,
    /// Fraction of replications whose loss stayed under `thm2_rhs`.
    pub coverage_thm2: f64,
    /// Per-half oracle quantity for the generated signal.
    pub oracle_rhs: Option<f64>,
}

impl RiskRow {
    /// Observed risk over the C-free dominant worst-case term.
    pub fn thm1_ratio(&self) -> f64 {
        self.mse_mean / self.thm1_rhs_over_c
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RiskReport {
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub rows: Vec<RiskRow>,
}

/// Runs the experiment. Replications execute in parallel into indexed
/// slots and are reduced in index order, so the report is identical for a
/// given config regardless of thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RiskReport, Error> {
    config.validate()?;
    let sigma = config.noise.sigma();
    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let signal = generate_signal(&config.signal, n)?;
        let bound = thm2_rhs(n, signal.s1, signal.s2, sigma, config.alpha)?;

        let losses: Vec<Result<f64, Error>> = (0..config.replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = replication_rng(config.seed, n, rep as u64);
                let z = generate_noise(&config.noise, n, &mut rng);
                let y: Vec<f64> = signal.values.iter().zip(&z).map(|(t, e)| t + e).collect();
                let fit = unimodal_lse_no_curve(&y)?;
                let loss: f64 = fit
                    .fitted
                    .iter()
                    .zip(&signal.values)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                Ok(loss / n as f64)
            })
            .collect();
        let mut loss_values = Vec::with_capacity(config.replications);
        for loss in losses {
            loss_values.push(loss?);
        }
        let (mse_mean, mse_std_err) = mean_and_std_err(&loss_values);
        let covered = loss_values.iter().filter(|&&l| l <= bound).count();

        rows.push(RiskRow {
            n,
            s1: signal.s1,
            s2: signal.s2,
            v: signal.range,
            mse_mean,
            mse_std_err,
            thm1_rhs_over_c: thm1_dominant_term(n, signal.range, sigma),
            thm2_rhs: bound,
            coverage_thm2: covered as f64 / config.replications as f64,
            oracle_rhs: Some(oracle_rhs_unimodal(&signal, sigma)?),
        });
    }
    Ok(RiskReport {
        replications: config.replications,
        seed: config.seed,
        alpha: config.alpha,
        rows,
    })
}

/// Ordinary least squares fit of `log(mse_mean)` against `log(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub std_err: f64,
    pub n_points: usize,
}

pub fn scaling_slope(report: &RiskReport) -> Result<SlopeFit, Error> {
    let points: Vec<(f64, f64)> = report
        .rows
        .iter()
        .map(|row| (row.n as f64, row.mse_mean))
        .collect();
    log_log_slope(&points)
}

/// Slope of log y against log x with its standard error. Needs at least
/// three points and strictly positive coordinates.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<SlopeFit, Error> {
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if x <= 0.0 || y <= 0.0 {
            return Err(Error::invalid("log-log fit needs positive coordinates"));
        }
        xs.push(x.ln());
        ys.push(y.ln());
    }
    let k = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("x values must not all coincide"));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (xs.len() - 2) as f64;
    let std_err = if dof > 0.0 {
        (rss / dof / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit {
        slope,
        std_err,
        n_points: points.len(),
    })
}
