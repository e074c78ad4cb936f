//! Exit-code contract: 0 success, 1 invariant failure, 2 input error,
//! 3 oracle mismatch, 4 convergence failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Unparseable or invalid input: exit 2.
    Input(String),
    /// Reference-implementation disagreement under `--oracle`: exit 3.
    OracleMismatch(String),
    /// Iterative solver failure: exit 4.
    Convergence(String),
    /// A checked identity missed its tolerance: exit 1.
    Invariant(String),
    /// Filesystem trouble: exit 2.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::OracleMismatch(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::OracleMismatch(msg) => write!(f, "oracle mismatch: {msg}"),
            CliError::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            CliError::Invariant(msg) => write!(f, "invariant violated: {msg}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl From<unireg::Error> for CliError {
    fn from(err: unireg::Error) -> Self {
        match err {
            unireg::Error::Convergence { .. } | unireg::Error::Infeasible { .. } => {
                CliError::Convergence(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Invariant(String::new()).exit_code(), 1);
        assert_eq!(CliError::Input(String::new()).exit_code(), 2);
        assert_eq!(CliError::OracleMismatch(String::new()).exit_code(), 3);
        assert_eq!(CliError::Convergence(String::new()).exit_code(), 4);
    }

    #[test]
    fn core_errors_map_by_kind() {
        let convergence = unireg::Error::Convergence {
            iterations: 5,
            gap: 1.0,
            last: vec![],
        };
        assert_eq!(CliError::from(convergence).exit_code(), 4);
        assert_eq!(
            CliError::from(unireg::Error::Infeasible { gap: 1.0 }).exit_code(),
            4
        );
        assert_eq!(CliError::from(unireg::Error::EmptyInput).exit_code(), 2);
        assert_eq!(
            CliError::from(unireg::Error::SizeGuard { n: 11, limit: 10 }).exit_code(),
            2
        );
    }
}
