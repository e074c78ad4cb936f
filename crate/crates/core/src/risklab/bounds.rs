//! Closed-form risk-bound formulas. All logarithms are natural.

use crate::error::Error;

/// Worst-case bound on the per-coordinate squared error:
/// `C sigma^(4/3) (v + sigma)^(2/3) n^(-2/3) + (C + 24 alpha) sigma^2 log(n)/n`.
/// The universal constant C is supplied by the caller.
pub fn thm1_rhs(n: usize, v: f64, sigma: f64, alpha: f64, c: f64) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::invalid(format!("n = {n} must be at least 2")));
    }
    validate_scales(v, sigma, alpha)?;
    if !c.is_finite() || c < 0.0 {
        return Err(Error::invalid(format!("constant {c} must be nonnegative")));
    }
    let nf = n as f64;
    Ok(
        c * sigma.powf(4.0 / 3.0) * (v + sigma).powf(2.0 / 3.0) * nf.powf(-2.0 / 3.0)
            + (c + 24.0 * alpha) * sigma * sigma * nf.ln() / nf,
    )
}

/// Dominant term of the worst-case bound with its constant factored out:
/// `sigma^(4/3) (v + sigma)^(2/3) n^(-2/3)`. Reports publish the ratio of
/// observed risk to this quantity.
pub fn thm1_dominant_term(n: usize, v: f64, sigma: f64) -> f64 {
    sigma.powf(4.0 / 3.0) * (v + sigma).powf(2.0 / 3.0) * (n as f64).powf(-2.0 / 3.0)
}

/// Piecewise-adaptive bound on the per-coordinate squared error for a
/// signal with s1 rising and s2 falling pieces:
/// `12 sigma^2 (s/n) log(e n/s) + 48 (alpha + 2) sigma^2 s log(n)/n`
/// with `s = s1 + s2`.
pub fn thm2_rhs(n: usize, s1: usize, s2: usize, sigma: f64, alpha: f64) -> Result<f64, Error> {
    let s = s1 + s2;
    if s == 0 || s > n {
        return Err(Error::invalid(format!(
            "piece count {s} must lie in 1..={n}"
        )));
    }
    validate_scales(0.0, sigma, alpha)?;
    let nf = n as f64;
    let sf = s as f64;
    Ok(
        12.0 * sigma * sigma * (sf / nf) * (std::f64::consts::E * nf / sf).ln()
            + 48.0 * (alpha + 2.0) * sigma * sigma * sf * nf.ln() / nf,
    )
}

fn validate_scales(v: f64, sigma: f64, alpha: f64) -> Result<(), Error> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::invalid(format!("range {v} must be nonnegative")));
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::invalid(format!("sigma {sigma} must be positive")));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::invalid(format!("alpha {alpha} must be positive")));
    }
    Ok(())
}
