use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input sequence is empty")]
    EmptyInput,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Brute-force reference routines refuse inputs above their size limit
    /// so they can never be mistaken for production paths.
    #[error("oracle size guard: n = {n} exceeds limit {limit}")]
    SizeGuard { n: usize, limit: usize },

    /// An iterative scheme stopped before reaching its tolerance. Carries the
    /// last iterate so callers can inspect or resume.
    #[error("no convergence after {iterations} iterations (gap {gap:.3e})")]
    Convergence {
        iterations: usize,
        gap: f64,
        last: Vec<f64>,
    },

    #[error("constraint sets appear to have empty intersection (gap {gap:.3e})")]
    Infeasible { gap: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Rejects empty input and non-finite entries.
pub(crate) fn check_sequence(values: &[f64]) -> Result<(), Error> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
    }
    Ok(())
}
