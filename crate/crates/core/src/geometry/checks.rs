//! Checks of the deterministic identities satisfied by the localized
//! supremum and the least-squares fit.

use super::sup::{Region, SupEvaluator, SupParams};
use crate::error::{check_sequence, Error};
use crate::isotonic::{Direction, PavaBlockStack};
use crate::rng::{replication_rng, standard_normal_vec};
use crate::unimodal::{is_unimodal, unimodal_lse};
use crate::util::{dist, mean_and_std_err, norm};
use rayon::prelude::*;
use serde::Serialize;

/// Outcome of one argmax-location check: the sliced objective
/// `f(t) = sup - t^2/2`, evaluated on a radius grid and at the radius the
/// fit actually achieved, must peak at the achieved radius.
#[derive(Debug, Clone, Serialize)]
pub struct SlicingReport {
    /// `||fit - theta*||`.
    pub achieved_radius: f64,
    pub f_at_achieved: f64,
    /// Max of f over the grid together with the achieved radius, so the
    /// gap below is nonnegative by construction.
    pub max_f_on_grid: f64,
    pub grid: Vec<f64>,
    pub f_grid: Vec<f64>,
    /// `max_f_on_grid - f_at_achieved`; zero up to optimizer tolerance when
    /// the achieved radius maximizes f.
    pub identity_gap: f64,
}

/// Evaluates the sliced objective for `y = theta* + z` on `grid` and at the
/// achieved radius of the unimodal fit. `theta_star` must be unimodal and
/// the grid must cover `[0, 2||z||]`, which always contains the achieved
/// radius.
pub fn slicing_check(y: &[f64], theta_star: &[f64], grid: &[f64]) -> Result<SlicingReport, Error> {
    slicing_check_with(y, theta_star, grid, &SupParams::default())
}

pub fn slicing_check_with(
    y: &[f64],
    theta_star: &[f64],
    grid: &[f64],
    params: &SupParams,
) -> Result<SlicingReport, Error> {
    check_sequence(y)?;
    check_sequence(theta_star)?;
    if y.len() != theta_star.len() {
        return Err(Error::invalid("length mismatch between y and theta*"));
    }
    if !is_unimodal(theta_star) {
        return Err(Error::invalid(
            "the reference point theta* must be unimodal",
        ));
    }
    if grid.is_empty() || grid[0] < 0.0 {
        return Err(Error::invalid(
            "grid must be nonempty with nonnegative radii",
        ));
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
    }
    let z: Vec<f64> = y.iter().zip(theta_star).map(|(a, b)| a - b).collect();
    let z_norm = norm(&z);
    if *grid.last().expect("nonempty") < 2.0 * z_norm * (1.0 - 1e-12) {
        return Err(Error::invalid(format!(
            "grid must cover [0, 2||z||] = [0, {}]",
            2.0 * z_norm
        )));
    }

    let fit = unimodal_lse(y)?;
    let achieved_radius = dist(&fit.fitted, theta_star);
    let evaluator = SupEvaluator::new(theta_star, Region::Unimodal, params.clone())?;
    let objective = |t: f64| -> Result<f64, Error> { Ok(evaluator.sup(&z, t)? - t * t / 2.0) };

    let f_at_achieved = objective(achieved_radius)?;
    let mut f_grid = Vec::with_capacity(grid.len());
    let mut max_f_on_grid = f_at_achieved;
    for &t in grid {
        let f = objective(t)?;
        max_f_on_grid = max_f_on_grid.max(f);
        f_grid.push(f);
    }

    Ok(SlicingReport {
        achieved_radius,
        f_at_achieved,
        max_f_on_grid,
        grid: grid.to_vec(),
        f_grid,
        identity_gap: max_f_on_grid - f_at_achieved,
    })
}

/// Monte Carlo estimate of the statistical dimension of the nondecreasing
/// cone: the expected squared norm of the cone projection of a standard
/// Gaussian vector.
#[derive(Debug, Clone, Serialize)]
pub struct StatDimReport {
    pub n: usize,
    pub replications: usize,
    pub estimate: f64,
    pub std_err: f64,
    /// `log(e n)`, the closed-form ceiling the estimate is compared to.
    pub log_en_bound: f64,
    /// Draws on which the projection-norm/supremum identity was verified.
    pub pointwise_checked: usize,
    /// Largest observed difference between `||proj z||` and the localized
    /// supremum at unit radius over those draws.
    pub max_pointwise_gap: f64,
}

pub fn statistical_dimension_mc(
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<StatDimReport, Error> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if replications < 2 {
        return Err(Error::invalid("need at least 2 replications"));
    }
    let values: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, n, rep as u64);
            let mut z = standard_normal_vec(&mut rng, n);
            let mut stack = PavaBlockStack::new();
            crate::isotonic::project_in_place(&mut stack, &mut z, Direction::Nondecreasing);
            z.iter().map(|v| v * v).sum()
        })
        .collect();
    let (estimate, std_err) = mean_and_std_err(&values);

    // Pointwise identity on a subsample: the projection norm equals the
    // supremum of <z, theta> over cone points inside the unit ball.
    let pointwise_checked = replications.min(100);
    let zeros = vec![0.0; n];
    let evaluator = SupEvaluator::new(&zeros, Region::ModeCone(n), SupParams::default())?;
    let gaps: Vec<Result<f64, Error>> = (0..pointwise_checked)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(seed, n, rep as u64);
            let mut z = standard_normal_vec(&mut rng, n);
            let sup = evaluator.sup(&z, 1.0)?;
            let mut stack = PavaBlockStack::new();
            crate::isotonic::project_in_place(&mut stack, &mut z, Direction::Nondecreasing);
            Ok((sup - norm(&z)).abs())
        })
        .collect();
    let mut max_pointwise_gap = 0.0f64;
    for gap in gaps {
        max_pointwise_gap = max_pointwise_gap.max(gap?);
    }

    Ok(StatDimReport {
        n,
        replications,
        estimate,
        std_err,
        log_en_bound: 1.0 + (n as f64).ln(),
        pointwise_checked,
        max_pointwise_gap,
    })
}

/// Samples `pairs` independent pairs (z, z') and returns the largest
/// observed ratio `|f(z) - f(z')| / ||z - z'||` for
/// `f(z) = localized_sup(z, theta*, t, region)`. The ratio can never exceed
/// t beyond numerical slack.
pub fn lipschitz_check(
    theta_star: &[f64],
    t: f64,
    region: Region,
    pairs: usize,
    seed: u64,
) -> Result<f64, Error> {
    check_sequence(theta_star)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::invalid(format!("radius {t} must be nonnegative")));
    }
    if pairs == 0 {
        return Err(Error::invalid("need at least one pair"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let n = theta_star.len();
    let evaluator = SupEvaluator::new(theta_star, region, SupParams::default())?;
    let ratios: Vec<Result<f64, Error>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng_a = replication_rng(seed, n, 2 * i as u64);
            let mut rng_b = replication_rng(seed, n, 2 * i as u64 + 1);
            let za = standard_normal_vec(&mut rng_a, n);
            let zb = standard_normal_vec(&mut rng_b, n);
            let fa = evaluator.sup(&za, t)?;
            let fb = evaluator.sup(&zb, t)?;
            let denom = dist(&za, &zb);
            Ok(if denom == 0.0 {
                0.0
            } else {
                (fa - fb).abs() / denom
            })
        })
        .collect();
    let mut max_ratio = 0.0f64;
    for ratio in ratios {
        max_ratio = max_ratio.max(ratio?);
    }
    Ok(max_ratio)
}

/// Evaluates `g(t) = localized_sup(z, theta*, t, C_m)` on the grid and
/// returns the largest midpoint-concavity violation
/// `(g(t1) + g(t2))/2 - g((t1+t2)/2)` over consecutive grid pairs. Concavity
/// of g makes every violation nonpositive up to solver tolerance.
pub fn concavity_check(
    z: &[f64],
    theta_star: &[f64],
    m: usize,
    grid: &[f64],
) -> Result<f64, Error> {
    check_sequence(z)?;
    check_sequence(theta_star)?;
    if z.len() != theta_star.len() {
        return Err(Error::invalid("length mismatch between z and theta*"));
    }
    if grid.len() < 2 {
        return Err(Error::invalid("grid needs at least two radii"));
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
    }
    let evaluator = SupEvaluator::new(theta_star, Region::ModeCone(m), SupParams::default())?;
    // Every radius must reach the cone, otherwise g is minus infinity there.
    let g: Vec<f64> = grid
        .iter()
        .map(|&t| evaluator.sup(z, t))
        .collect::<Result<_, _>>()?;
    let mut worst = f64::NEG_INFINITY;
    for (i, pair) in grid.windows(2).enumerate() {
        let mid = evaluator.sup(z, (pair[0] + pair[1]) / 2.0)?;
        worst = worst.max((g[i] + g[i + 1]) / 2.0 - mid);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slicing_zero_noise_is_exact() {
        let theta = [0.0, 1.0, 0.5];
        let grid = [0.5, 1.0, 1.5];
        let report = slicing_check(&theta, &theta, &grid).unwrap();
        assert_eq!(report.achieved_radius, 0.0);
        assert_eq!(report.f_at_achieved, 0.0);
        assert_eq!(report.identity_gap, 0.0);
        for (t, f) in report.grid.iter().zip(&report.f_grid) {
            // With z = 0 the supremum is 0, so f(t) = -t^2/2.
            assert!((f + t * t / 2.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn slicing_one_dimensional_closed_form() {
        // n = 1: f(t) = |z| t - t^2/2, maximized exactly at t = |z|.
        let y = [1.75];
        let theta = [1.0];
        let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.025).collect();
        let report = slicing_check(&y, &theta, &grid).unwrap();
        assert!((report.achieved_radius - 0.75).abs() <= 1e-12);
        assert!((report.f_at_achieved - 0.75 * 0.75 / 2.0).abs() <= 1e-9);
        assert!(report.identity_gap >= 0.0);
        assert!(report.identity_gap <= 1e-9);
    }

    #[test]
    fn slicing_rejects_non_unimodal_reference() {
        let err = slicing_check(&[1.0, 2.0, 1.0], &[2.0, 1.0, 2.0], &[1.0, 2.0, 4.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn slicing_requires_covering_grid() {
        let err = slicing_check(&[2.0, 0.0], &[0.0, 0.0], &[0.5, 1.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn statdim_single_coordinate_is_unit() {
        let report = statistical_dimension_mc(1, 4000, 5).unwrap();
        assert!((report.estimate - 1.0).abs() <= 3.0 * report.std_err);
        assert!(report.max_pointwise_gap <= 1e-6);
    }

    #[test]
    fn lipschitz_zero_radius_is_zero() {
        assert_eq!(
            lipschitz_check(&[0.0, 0.0], 0.0, Region::Unimodal, 4, 9).unwrap(),
            0.0
        );
    }

    #[test]
    fn lipschitz_single_coordinate_slope_at_most_t() {
        let ratio = lipschitz_check(&[0.0], 1.0, Region::Unimodal, 50, 9).unwrap();
        assert!(ratio <= 1.0 + 1e-6, "ratio {ratio}");
    }

    #[test]
    fn concavity_zero_functional_is_flat() {
        let grid = [0.5, 1.0, 1.5, 2.0];
        let violation = concavity_check(&[0.0, 0.0, 0.0], &[0.0, 0.5, 0.25], 2, &grid).unwrap();
        assert!(violation.abs() <= 1e-9);
    }

    #[test]
    fn concavity_one_dimension_is_linear() {
        let grid = [0.25, 0.5, 1.0, 2.0];
        let violation = concavity_check(&[1.3], &[0.0], 1, &grid).unwrap();
        assert!(violation <= 1e-9, "violation {violation}");
    }
}
