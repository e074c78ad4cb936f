//! Best piecewise-constant approximation errors and the oracle risk
//! quantity built from them.

use crate::error::{check_sequence, Error};
use crate::risklab::signal::GeneratedSignal;
use crate::util::segment_cost;

/// Prefix sums and sums of squares, for O(1) segment costs.
fn prefix_moments(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let mut sum = vec![0.0; n + 1];
    let mut sum_sq = vec![0.0; n + 1];
    for (i, &v) in values.iter().enumerate() {
        sum[i + 1] = sum[i] + v;
        sum_sq[i + 1] = sum_sq[i] + v * v;
    }
    (sum, sum_sq)
}

/// One dynamic-program row: `next[j]` becomes the best error for the first
/// j values using one more segment than `dp` was built with.
fn dp_row(dp: &[f64], next: &mut [f64], k: usize, cost: &impl Fn(usize, usize) -> f64) {
    for (j, slot) in next.iter_mut().enumerate() {
        *slot = if j < k {
            0.0
        } else {
            (k - 1..j)
                .map(|i| dp[i] + cost(i, j))
                .fold(f64::INFINITY, f64::min)
        };
    }
}

/// `errors[k-1]` is the minimal sum of within-segment squared deviations
/// from segment means over partitions of `values` into exactly k
/// consecutive segments, for k = 1..=k_max. Standard dynamic program over
/// prefix sums: O(n^2) per k.
pub fn min_segment_errors(values: &[f64], k_max: usize) -> Result<Vec<f64>, Error> {
    check_sequence(values)?;
    let n = values.len();
    if k_max == 0 || k_max > n {
        return Err(Error::invalid(format!(
            "segment count {k_max} must lie in 1..={n}"
        )));
    }
    let (prefix_sum, prefix_sum_sq) = prefix_moments(values);
    let cost = |a: usize, b: usize| {
        segment_cost(
            prefix_sum[b] - prefix_sum[a],
            prefix_sum_sq[b] - prefix_sum_sq[a],
            b - a,
        )
    };

    let mut errors = Vec::with_capacity(k_max);
    // dp[j] = best error for values[..j] with the current segment count.
    let mut dp: Vec<f64> = (0..=n)
        .map(|j| if j == 0 { 0.0 } else { cost(0, j) })
        .collect();
    errors.push(dp[n]);
    let mut next = vec![0.0; n + 1];
    for k in 2..=k_max {
        dp_row(&dp, &mut next, k, &cost);
        std::mem::swap(&mut dp, &mut next);
        errors.push(dp[n]);
    }
    Ok(errors)
}

/// Oracle risk quantity for a monotone vector: the infimum over piece
/// counts k of `err(k)/n + sigma^2 (k/n) log(e n / k)`, where `err(k)` is
/// the best k-segment approximation error. For a monotone vector the
/// best segment-mean approximant is itself monotone, so the order
/// constraint is inactive and the infimum over monotone vectors is exact.
///
/// The penalty term grows with k, so the scan stops as soon as the penalty
/// alone exceeds the best value seen; this keeps the exact answer while
/// avoiding the full O(n^3) sweep.
pub fn oracle_rhs(theta_star: &[f64], sigma: f64) -> Result<f64, Error> {
    check_sequence(theta_star)?;
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::invalid(format!("sigma {sigma} must be nonnegative")));
    }
    let nondecreasing = theta_star.windows(2).all(|w| w[0] <= w[1]);
    let nonincreasing = theta_star.windows(2).all(|w| w[0] >= w[1]);
    if !nondecreasing && !nonincreasing {
        return Err(Error::invalid("oracle quantity requires a monotone vector"));
    }
    let n = theta_star.len();
    let nf = n as f64;
    let penalty =
        |k: usize| sigma * sigma * (k as f64 / nf) * (std::f64::consts::E * nf / k as f64).ln();

    // Incremental DP, one piece count at a time.
    let (prefix_sum, prefix_sum_sq) = prefix_moments(theta_star);
    let cost = |a: usize, b: usize| {
        segment_cost(
            prefix_sum[b] - prefix_sum[a],
            prefix_sum_sq[b] - prefix_sum_sq[a],
            b - a,
        )
    };

    let mut dp: Vec<f64> = (0..=n)
        .map(|j| if j == 0 { 0.0 } else { cost(0, j) })
        .collect();
    let mut best = dp[n] / nf + penalty(1);
    let mut next = vec![0.0; n + 1];
    for k in 2..=n {
        // The penalty grows with k and err(k) >= 0, so every remaining
        // candidate is at least penalty(k) and the scan may stop.
        if penalty(k) >= best {
            break;
        }
        dp_row(&dp, &mut next, k, &cost);
        std::mem::swap(&mut dp, &mut next);
        let value = dp[n] / nf + penalty(k);
        if value < best {
            best = value;
        }
    }
    Ok(best)
}

/// Length-weighted oracle quantity for a unimodal signal: the rising half
/// through the smallest valid mode and the falling remainder are each
/// monotone, so the monotone oracle applies per half.
pub fn oracle_rhs_unimodal(signal: &GeneratedSignal, sigma: f64) -> Result<f64, Error> {
    let n = signal.values.len();
    let m = signal.mode;
    let rising = oracle_rhs(&signal.values[..m], sigma)?;
    if m == n {
        return Ok(rising);
    }
    let falling = oracle_rhs(&signal.values[m..], sigma)?;
    Ok((m as f64 * rising + (n - m) as f64 * falling) / n as f64)
}
