use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bisection ran out of iterations before the bracket closed.
    #[error("bisection did not converge after {iterations} iterations; bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64, iterations: usize },

    /// The caller violated a precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// The construction is not defined for the requested t-definer.
    #[error("unsupported: {0}")]
    Unsupported(String),
}
