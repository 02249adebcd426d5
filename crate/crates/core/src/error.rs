use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation point is closer to a singular edge than the policy allows.
    #[error("precision error: geometric gap {gap:e} is below the minimum {min_gap:e}")]
    Precision { gap: f64, min_gap: f64 },

    /// A series could not be certified to the requested tolerance.
    #[error("truncation error: tail bound {achieved:e} after {terms} terms exceeds tolerance {tol:e}")]
    Truncation { achieved: f64, terms: usize, tol: f64 },

    /// Brute-force enumeration ran out of its walk budget.
    #[error("enumeration budget of {budget} walks exceeded at walk length {reached_len}")]
    Budget { budget: usize, reached_len: usize },

    /// The interior transition matrix does not define a convergent walk sum.
    #[error("non-convergent network: spectral radius estimate {radius} >= {threshold}")]
    NonConvergent { radius: f64, threshold: f64 },

    /// A matrix exceeded the supported size.
    #[error("matrix of size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },

    /// A linear solve failed (singular or not positive definite).
    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
