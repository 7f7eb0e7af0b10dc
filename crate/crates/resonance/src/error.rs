use std::path::PathBuf;

/// Failures of a run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] resonance_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad artifact {path}: {reason}")]
    Artifact { path: PathBuf, reason: String },
    #[error("{0} check(s) failed")]
    Assertion(usize),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use resonance_core::Error as E;
        match self {
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::Core(E::BudgetExceeded(_) | E::QuadratureFailure { .. } | E::ZeroCountMismatch { .. }) => {
                EXIT_BUDGET
            }
            _ => EXIT_CONFIG,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use resonance_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Assertion(3).exit_code(), 1);
        assert_eq!(CliError::Core(E::BudgetExceeded("n".into())).exit_code(), 3);
        assert_eq!(CliError::Core(E::QuadratureFailure { achieved: 1.0, requested: 0.1 }).exit_code(), 3);
        assert_eq!(CliError::Core(E::Precondition("k".into())).exit_code(), 2);
        assert_eq!(CliError::Core(E::Domain("d".into())).exit_code(), 2);
        assert_eq!(CliError::Core(E::EmptyRange).exit_code(), 2);
    }
}
