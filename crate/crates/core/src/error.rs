use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data violates an invariant of its type.
    #[error("validation error: {0}")]
    Validation(String),
    /// The request is well formed but not supported by this model.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A factorization met a non-positive pivot.
    #[error("singular operator: {0}")]
    Singular(String),
    /// The obstacle solver stopped before meeting its tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    IterationLimit { iterations: usize, residual: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
