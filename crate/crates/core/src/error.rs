use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An iterative method ran out of budget. `best` is the last value it had.
    #[error("{what} did not converge (best value {best:e}, error estimate {error_estimate:e})")]
    NonConvergence {
        what: &'static str,
        best: f64,
        error_estimate: f64,
    },

    /// Too many Monte Carlo trials had to be resampled.
    #[error("{failures} of {trials} trials failed, exceeding the allowed fraction")]
    TooManyFailures { failures: u64, trials: u64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a numerical routine rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::TooManyFailures { .. }
        )
    }
}
