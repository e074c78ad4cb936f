//! Brute-force reference implementations for small instances: exhaustive
//! monotone projection, exhaustive per-mode unimodal projection, dense-grid
//! search, and exhaustive segmentation.
//!
//! These exist solely to pin down the fast paths in tests and behind the
//! CLI's `--oracle` flag. Size guards are hard errors, never silent
//! fallbacks, so a reference routine can never be mistaken for a production
//! path.

use crate::error::{check_sequence, Error};
use crate::isotonic::Direction;
use crate::util::{first_argmax, segment_cost};

/// Largest n accepted by [`brute_monotone_projection`] (2^(n-1) partitions).
pub const MAX_MONOTONE_N: usize = 12;
/// Largest n accepted by [`brute_unimodal_projection`].
pub const MAX_UNIMODAL_N: usize = 10;
/// Largest n accepted by [`exhaustive_segment_error`].
pub const MAX_SEGMENT_N: usize = 16;
/// Largest dimension accepted by [`dense_grid_search`].
pub const MAX_GRID_DIM: usize = 4;

fn guard(n: usize, limit: usize) -> Result<(), Error> {
    if n > limit {
        return Err(Error::SizeGuard { n, limit });
    }
    Ok(())
}

/// Exhaustive monotone projection. Enumerates every partition of 1..n into
/// consecutive blocks (2^(n-1) bitmasks, ascending: bit i set means a
/// boundary after position i), forms blockwise means, and among partitions
/// whose means respect the direction ordering returns the candidate with
/// minimal SSE. The optimum is blockwise constant with ordered block means,
/// so this is the true projection. First-found minimum wins, which makes
/// tie-breaking deterministic.
pub fn brute_monotone_projection(y: &[f64], direction: Direction) -> Result<Vec<f64>, Error> {
    check_sequence(y)?;
    let n = y.len();
    guard(n, MAX_MONOTONE_N)?;

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut candidate = vec![0.0; n];
    for mask in 0u32..(1u32 << (n - 1)) {
        let mut ordered = true;
        let mut sse = 0.0;
        let mut prev_mean = f64::NEG_INFINITY;
        let mut start = 0;
        for end in 0..n {
            let boundary = end + 1 == n || mask >> end & 1 == 1;
            if !boundary {
                continue;
            }
            let block = &y[start..=end];
            let mean = block.iter().sum::<f64>() / block.len() as f64;
            let signed = match direction {
                Direction::Nondecreasing => mean,
                Direction::Nonincreasing => -mean,
            };
            if signed < prev_mean {
                ordered = false;
                break;
            }
            prev_mean = signed;
            for (i, &v) in block.iter().enumerate() {
                sse += (v - mean) * (v - mean);
                candidate[start + i] = mean;
            }
            start = end + 1;
        }
        if ordered && best.as_ref().is_none_or(|(b, _)| sse < *b) {
            best = Some((sse, candidate.clone()));
        }
    }
    Ok(best.expect("the all-pooled partition is always ordered").1)
}

/// Exhaustive unimodal projection: for every split m, the best
/// nondecreasing fit to `y[..m]` concatenated with the best nonincreasing
/// fit to `y[m..]`; the smallest split whose total SSE lies within the
/// shared tie tolerance of the minimum wins, mirroring the fast path so
/// equality tests stay exact even on tied data. Returns (fitted, mode, sse)
/// where mode is the 1-based first index attaining the fitted maximum (the
/// smallest valid mode of the fit).
pub fn brute_unimodal_projection(y: &[f64]) -> Result<(Vec<f64>, usize, f64), Error> {
    check_sequence(y)?;
    let n = y.len();
    guard(n, MAX_UNIMODAL_N)?;

    let mut candidates = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    for m in 1..=n {
        let mut fitted = brute_monotone_projection(&y[..m], Direction::Nondecreasing)?;
        if m < n {
            fitted.extend(brute_monotone_projection(
                &y[m..],
                Direction::Nonincreasing,
            )?);
        }
        let sse: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
        errors.push(sse);
        candidates.push(fitted);
    }
    let best = crate::unimodal::smallest_near_min(&errors);
    let fitted = candidates.swap_remove(best);
    let mode = first_argmax(&fitted) + 1;
    Ok((fitted, mode, errors[best]))
}

/// Minimal sum of within-segment squared deviations from segment means over
/// all partitions of `theta_star` into exactly `k` consecutive blocks.
/// Segment costs use the same `sum_sq - sum^2/count` arithmetic as the
/// dynamic program it cross-checks, so agreement is exact.
pub fn exhaustive_segment_error(theta_star: &[f64], k: usize) -> Result<f64, Error> {
    check_sequence(theta_star)?;
    let n = theta_star.len();
    guard(n, MAX_SEGMENT_N)?;
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "segment count {k} out of range 1..={n}"
        )));
    }

    let mut prefix_sum = vec![0.0; n + 1];
    let mut prefix_sum_sq = vec![0.0; n + 1];
    for (i, &v) in theta_star.iter().enumerate() {
        prefix_sum[i + 1] = prefix_sum[i] + v;
        prefix_sum_sq[i + 1] = prefix_sum_sq[i] + v * v;
    }
    let cost = |a: usize, b: usize| {
        segment_cost(
            prefix_sum[b] - prefix_sum[a],
            prefix_sum_sq[b] - prefix_sum_sq[a],
            b - a,
        )
    };

    // Walk every choice of k-1 interior boundaries.
    let mut best = f64::INFINITY;
    let mut bounds = vec![0usize; k + 1];
    bounds[k] = n;
    fn recurse(
        level: usize,
        k: usize,
        n: usize,
        bounds: &mut Vec<usize>,
        cost: &impl Fn(usize, usize) -> f64,
        best: &mut f64,
    ) {
        if level == k {
            let total: f64 = (0..k).map(|j| cost(bounds[j], bounds[j + 1])).sum();
            if total < *best {
                *best = total;
            }
            return;
        }
        // bounds[level] ranges so every remaining segment stays nonempty.
        for b in bounds[level - 1] + 1..=n - (k - level) {
            bounds[level] = b;
            recurse(level + 1, k, n, bounds, cost, best);
        }
    }
    recurse(1, k, n, &mut bounds, &cost, &mut best);
    Ok(best)
}

/// `E ||proj z||^2` for the two-dimensional nondecreasing cone and standard
/// Gaussian z, by Simpson quadrature over `[-half_width, half_width]^2`:
/// sorted points are kept, the rest pool to their mean. The exact value is
/// 3/2; quadrature makes that an independent reference rather than a quoted
/// constant. `cells` must be even.
pub fn brute_statdim_two(half_width: f64, cells: usize) -> Result<f64, Error> {
    if cells < 2 || !cells.is_multiple_of(2) || !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::invalid(
            "need an even, positive cell count and a positive half width",
        ));
    }
    let h = 2.0 * half_width / cells as f64;
    let weight = |i: usize| {
        if i == 0 || i == cells {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let density = |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut total = 0.0;
    for i in 0..=cells {
        let z1 = -half_width + i as f64 * h;
        let mut inner = 0.0;
        for j in 0..=cells {
            let z2 = -half_width + j as f64 * h;
            let value = if z1 <= z2 {
                z1 * z1 + z2 * z2
            } else {
                (z1 + z2) * (z1 + z2) / 2.0
            };
            inner += weight(j) * value * density(z2);
        }
        total += weight(i) * inner * density(z1) * h * h / 9.0;
    }
    Ok(total)
}

/// Dense grid search over `[lo, hi]^dim`: returns the grid point maximizing
/// `objective` among points where it returns `Some`, together with the
/// value. Guarded to tiny dimensions; strictly a verification tool.
pub fn dense_grid_search(
    dim: usize,
    lo: f64,
    hi: f64,
    steps: usize,
    objective: impl Fn(&[f64]) -> Option<f64>,
) -> Result<(Vec<f64>, f64), Error> {
    guard(dim, MAX_GRID_DIM)?;
    if steps < 2 || hi <= lo {
        return Err(Error::invalid("grid needs steps >= 2 and hi > lo"));
    }
    let mut point = vec![lo; dim];
    let mut best_point = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut index = vec![0usize; dim];
    loop {
        for (x, &i) in point.iter_mut().zip(&index) {
            *x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        }
        if let Some(value) = objective(&point) {
            if value > best {
                best = value;
                best_point = point.clone();
            }
        }
        // Odometer increment.
        let mut axis = 0;
        loop {
            if axis == dim {
                if best_point.is_empty() {
                    return Err(Error::invalid("objective was None on every grid point"));
                }
                return Ok((best_point, best));
            }
            index[axis] += 1;
            if index[axis] < steps {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_oracle_spec_cases() {
        let fit = brute_monotone_projection(&[1.0, 2.0, 3.0], Direction::Nondecreasing).unwrap();
        assert_eq!(fit, vec![1.0, 2.0, 3.0]);

        let fit = brute_monotone_projection(&[3.0, 1.0, 2.0], Direction::Nondecreasing).unwrap();
        for v in &fit {
            assert!((v - 2.0).abs() < 1e-12);
        }

        let fit = brute_monotone_projection(&[2.0, 1.0], Direction::Nondecreasing).unwrap();
        assert_eq!(fit, vec![1.5, 1.5]);
    }

    #[test]
    fn unimodal_oracle_spec_cases() {
        let (fitted, mode, sse) = brute_unimodal_projection(&[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(fitted, vec![1.0, 3.0, 2.0]);
        assert_eq!(mode, 2);
        assert_eq!(sse, 0.0);

        let (fitted, mode, sse) = brute_unimodal_projection(&[2.0, 1.0, 2.0]).unwrap();
        assert_eq!(fitted, vec![2.0, 1.5, 1.5]);
        assert_eq!(mode, 1);
        assert!((sse - 0.5).abs() < 1e-12);
    }

    #[test]
    fn size_guards_are_hard_errors() {
        let long = vec![0.0; 13];
        assert!(matches!(
            brute_monotone_projection(&long, Direction::Nondecreasing),
            Err(Error::SizeGuard { n: 13, limit: 12 })
        ));
        let long = vec![0.0; 11];
        assert!(matches!(
            brute_unimodal_projection(&long),
            Err(Error::SizeGuard { n: 11, limit: 10 })
        ));
        let long = vec![0.0; 17];
        assert!(matches!(
            exhaustive_segment_error(&long, 2),
            Err(Error::SizeGuard { n: 17, limit: 16 })
        ));
    }

    #[test]
    fn segment_error_extremes_and_ramp() {
        let ramp = [0.0, 1.0, 2.0, 3.0];
        // k = n: singleton blocks.
        assert_eq!(exhaustive_segment_error(&ramp, 4).unwrap(), 0.0);
        // k = 1: deviation around the grand mean.
        let mean = 1.5;
        let total: f64 = ramp.iter().map(|v| (v - mean) * (v - mean)).sum();
        assert!((exhaustive_segment_error(&ramp, 1).unwrap() - total).abs() < 1e-12);
        // k = 2: the 2+2 split beats 1+3 and 3+1.
        assert!((exhaustive_segment_error(&ramp, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_statdim_recovers_three_halves() {
        let value = brute_statdim_two(8.0, 160).unwrap();
        assert!((value - 1.5).abs() < 1e-3, "quadrature {value}");
        assert!(brute_statdim_two(8.0, 3).is_err());
    }

    #[test]
    fn grid_search_finds_a_known_maximum() {
        // max of -(x-0.25)^2 - (y+0.5)^2 over [-1,1]^2.
        let (point, value) = dense_grid_search(2, -1.0, 1.0, 41, |p| {
            Some(-(p[0] - 0.25) * (p[0] - 0.25) - (p[1] + 0.5) * (p[1] + 0.5))
        })
        .unwrap();
        assert!((point[0] - 0.25).abs() < 0.03);
        assert!((point[1] + 0.5).abs() < 0.03);
        assert!(value > -0.002);
    }
}
