//! Exact unimodal least squares in O(n) total time.
//!
//! A unimodal sequence rises to a mode and then falls. The estimator scans
//! prefix errors of the best nondecreasing fit and suffix errors of the best
//! nonincreasing fit, so the squared error of the best fit with split after
//! position m is available for every m in one pass. Minimizing over splits
//! equals minimizing over all unimodal sequences: a vector nondecreasing on
//! 1..m and nonincreasing on m+1..n is itself unimodal (its mode lands at m
//! or m+1 depending on which boundary value is larger).

use crate::error::{check_sequence, Error};
use crate::geometry::{dykstra_project, ConvexSet};
use crate::isotonic::{
    fit_into, prefix_isotonic_sse, suffix_antitonic_sse, Direction, PavaBlockStack,
};
use crate::util::{first_argmax, first_argmin};

/// A fitted unimodal least-squares solution.
#[derive(Debug, Clone)]
pub struct UnimodalFit {
    pub fitted: Vec<f64>,
    /// 1-based position of the fitted peak: the smallest m such that the
    /// fit is nondecreasing through m and nonincreasing after.
    pub mode: usize,
    pub sse: f64,
    /// `per_mode_sse[m-1]` is the squared error of the best fit whose
    /// rising half ends at position m; `None` when fitting was asked to
    /// skip materializing the curve.
    pub per_mode_sse: Option<Vec<f64>>,
}

/// Global minimizer of `||y - theta||^2` over unimodal sequences, keeping
/// the full per-mode SSE curve.
pub fn unimodal_lse(y: &[f64]) -> Result<UnimodalFit, Error> {
    lse_impl(y, true)
}

/// Same fit without materializing the per-mode curve.
pub fn unimodal_lse_no_curve(y: &[f64]) -> Result<UnimodalFit, Error> {
    lse_impl(y, false)
}

fn lse_impl(y: &[f64], keep_curve: bool) -> Result<UnimodalFit, Error> {
    check_sequence(y)?;
    let n = y.len();
    let p = prefix_isotonic_sse(y, Direction::Nondecreasing)?;
    let s = suffix_antitonic_sse(y)?;

    // Split after position j+1 (1-based m = j+1): rising fit of y[..=j],
    // falling fit of y[j+1..].
    let per_mode: Vec<f64> = (0..n).map(|j| p[j + 1] + s[j + 1]).collect();
    let best = smallest_near_min(&per_mode);
    let sse = per_mode[best];

    let mut fitted = vec![0.0; n];
    let mut stack = PavaBlockStack::new();
    fit_into(
        &mut stack,
        &y[..=best],
        Direction::Nondecreasing,
        &mut fitted[..=best],
    );
    if best + 1 < n {
        fit_into(
            &mut stack,
            &y[best + 1..],
            Direction::Nonincreasing,
            &mut fitted[best + 1..],
        );
    }
    let mode = first_argmax(&fitted) + 1;

    Ok(UnimodalFit {
        fitted,
        mode,
        sse,
        per_mode_sse: keep_curve.then_some(per_mode),
    })
}

/// Relative slack used when picking the smallest near-minimal split. A
/// strict argmin would make exact ties (which quantized data produce
/// routinely) fall to whichever side the last few ulps of two different
/// summation orders land on; the slack keeps the choice stable across
/// arithmetic paths. The reference implementation in `oracle` applies the
/// same rule.
pub(crate) const SPLIT_TIE_TOL: f64 = 1e-9;

/// Smallest index whose value is within `SPLIT_TIE_TOL` (relative) of the
/// minimum.
pub(crate) fn smallest_near_min(values: &[f64]) -> usize {
    let min = values[first_argmin(values)];
    let cutoff = min + SPLIT_TIE_TOL * (1.0 + min.abs());
    values
        .iter()
        .position(|&v| v <= cutoff)
        .expect("minimum exists")
}

/// True when `values` lies in the mode cone with its peak at the 1-based
/// position `m`: nondecreasing through m and nonincreasing from m on.
pub fn is_unimodal_with_mode(values: &[f64], m: usize) -> bool {
    if m < 1 || m > values.len() {
        return false;
    }
    values[..m].windows(2).all(|w| w[0] <= w[1]) && values[m - 1..].windows(2).all(|w| w[0] >= w[1])
}

/// True when `values` is nondecreasing up to some index and nonincreasing
/// afterwards (plateaus allowed anywhere).
pub fn is_unimodal(values: &[f64]) -> bool {
    let n = values.len();
    let mut i = 0;
    while i + 1 < n && values[i + 1] >= values[i] {
        i += 1;
    }
    while i + 1 < n && values[i + 1] <= values[i] {
        i += 1;
    }
    i + 1 == n || n == 0
}

/// Suggested tolerance for [`project_onto_mode_cone`].
pub const MODE_CONE_TOL: f64 = 1e-10;
/// Suggested iteration cap for [`project_onto_mode_cone`].
pub const MODE_CONE_MAX_ITER: usize = 100_000;

/// Euclidean projection of `y` onto the single mode cone with peak at the
/// 1-based position `m`, including the coupling constraint between
/// positions m and m+1. Computed by alternating projections between the two
/// monotone half-cones; converged when successive iterates differ by less
/// than `tol` in Euclidean norm.
pub fn project_onto_mode_cone(
    y: &[f64],
    m: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, Error> {
    check_sequence(y)?;
    if m < 1 || m > y.len() {
        return Err(Error::invalid(format!(
            "mode {m} out of range 1..={}",
            y.len()
        )));
    }
    dykstra_project(y, &[ConvexSet::mode_cone(m)], tol, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::sq_dist;

    const MODE_TOL: f64 = 1e-10;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn already_unimodal_input_is_returned_with_its_peak() {
        let fit = unimodal_lse(&[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(fit.fitted, vec![1.0, 3.0, 2.0]);
        assert_eq!(fit.mode, 2);
        assert_eq!(fit.sse, 0.0);
    }

    #[test]
    fn valley_pools_the_tail_and_ties_resolve_to_smallest_split() {
        // Splits m = 1, 2, 3 all give SSE 0.5; the smallest split wins and
        // its fit peaks at the first position. Verified against
        // `oracle::brute_unimodal_projection`.
        let fit = unimodal_lse(&[2.0, 1.0, 2.0]).unwrap();
        assert_close(&fit.fitted, &[2.0, 1.5, 1.5], 1e-15);
        assert_eq!(fit.mode, 1);
        assert!((fit.sse - 0.5).abs() < 1e-12);
        let curve = fit.per_mode_sse.as_ref().unwrap();
        for &v in curve {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton() {
        let fit = unimodal_lse(&[5.0]).unwrap();
        assert_eq!(fit.fitted, vec![5.0]);
        assert_eq!(fit.mode, 1);
        assert_eq!(fit.sse, 0.0);
    }

    #[test]
    fn rejects_empty_input() {
        assert!(matches!(unimodal_lse(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn per_mode_curve_decomposition_identity() {
        let y = [0.4, -1.0, 2.2, 2.2, -0.3, 0.9];
        let fit = unimodal_lse(&y).unwrap();
        let p = prefix_isotonic_sse(&y, Direction::Nondecreasing).unwrap();
        let s = suffix_antitonic_sse(&y).unwrap();
        let curve = fit.per_mode_sse.as_ref().unwrap();
        for (j, &v) in curve.iter().enumerate() {
            assert_eq!(v, p[j + 1] + s[j + 1]);
        }
        let min = curve.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(fit.sse, min);
        assert!((fit.sse - sq_dist(&y, &fit.fitted)).abs() <= 1e-9);
        assert!(is_unimodal(&fit.fitted));
    }

    #[test]
    fn no_curve_variant_matches() {
        let y = [0.4, -1.0, 2.2, 2.2, -0.3, 0.9];
        let a = unimodal_lse(&y).unwrap();
        let b = unimodal_lse_no_curve(&y).unwrap();
        assert_eq!(a.fitted, b.fitted);
        assert_eq!(a.mode, b.mode);
        assert_eq!(a.sse, b.sse);
        assert!(b.per_mode_sse.is_none());
    }

    #[test]
    fn unimodality_predicate() {
        assert!(is_unimodal(&[1.0, 3.0, 2.0]));
        assert!(is_unimodal(&[1.0, 2.0, 2.0, 1.0]));
        assert!(is_unimodal(&[3.0, 2.0, 1.0]));
        assert!(is_unimodal(&[1.0, 2.0, 3.0]));
        assert!(is_unimodal(&[7.0]));
        assert!(!is_unimodal(&[1.0, 2.0, 1.0, 2.0]));
        assert!(!is_unimodal(&[2.0, 1.0, 2.0]));
    }

    #[test]
    fn mode_cone_fixed_point_and_known_projections() {
        // A point already in the cone projects to itself.
        let y = [1.0, 2.0, 1.5, 0.5];
        let fit = project_onto_mode_cone(&y, 2, MODE_CONE_TOL, MODE_CONE_MAX_ITER).unwrap();
        assert_close(&fit, &y, MODE_TOL);

        // Mode 1 is the nonincreasing cone.
        let fit =
            project_onto_mode_cone(&[1.0, 2.0, 3.0], 1, MODE_CONE_TOL, MODE_CONE_MAX_ITER).unwrap();
        assert_close(&fit, &[2.0, 2.0, 2.0], MODE_TOL);

        // Verified against a dense-grid reference at n = 4.
        let fit =
            project_onto_mode_cone(&[0.0, 2.0, 0.0, 0.0], 1, MODE_CONE_TOL, MODE_CONE_MAX_ITER)
                .unwrap();
        assert_close(&fit, &[1.0, 1.0, 0.0, 0.0], MODE_TOL);
    }

    #[test]
    fn mode_cone_rejects_bad_mode() {
        assert!(matches!(
            project_onto_mode_cone(&[1.0, 2.0], 3, MODE_CONE_TOL, 100),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            project_onto_mode_cone(&[1.0, 2.0], 0, MODE_CONE_TOL, 100),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn basic_inequality_and_trivial_bound_hold_pointwise() {
        // For any unimodal truth and any noise, the fit satisfies
        // ||fit - truth||^2 <= 2 <z, fit - truth> and ||fit - truth|| <= 2 ||z||.
        let truth = [0.0, 0.5, 1.0, 1.0, 0.25, -0.5];
        let noise = [0.3, -0.8, 0.1, 0.0, 0.55, -0.25];
        let y: Vec<f64> = truth.iter().zip(&noise).map(|(t, z)| t + z).collect();
        let fit = unimodal_lse(&y).unwrap();
        let diff: Vec<f64> = fit.fitted.iter().zip(&truth).map(|(a, b)| a - b).collect();
        let loss = crate::util::dot(&diff, &diff);
        let inner = crate::util::dot(&noise, &diff);
        assert!(loss <= 2.0 * inner + 1e-9);
        assert!(loss.sqrt() <= 2.0 * crate::util::norm(&noise) + 1e-9);
    }
}
