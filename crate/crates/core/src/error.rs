use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no primes in the resonator range and no block override given")]
    EmptyRange,
    #[error("weight denominator log p - log2 N - log3 N is not positive for p = {0}")]
    DegenerateWeight(u64),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("zeta has a pole at s = 1")]
    PoleAt1,
    #[error("height {height} exceeds the configured maximum {max}")]
    HeightOutOfRange { height: f64, max: f64 },
    #[error("t = {t} lies within {tol} of a zero ordinate")]
    OrdinateTooClose { t: f64, tol: f64 },
    #[error("quadrature failed: error estimate {achieved:e} above target {requested:e}")]
    QuadratureFailure { achieved: f64, requested: f64 },
    #[error("zero count mismatch below {height}: sign changes {found}, argument principle {expected}")]
    ZeroCountMismatch {
        height: f64,
        found: usize,
        expected: i64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
