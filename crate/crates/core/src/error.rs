//! Crate-wide error type.

/// Errors surfaced by model fitting, sampling and special-function evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside a function's mathematical domain.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// Incompatible vector/matrix dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A symmetric positive-definite solve failed or the matrix is too
    /// ill-conditioned to trust. `cond` is a Cholesky-diagonal estimate of
    /// the 2-norm condition number (`f64::INFINITY` when factorization
    /// failed outright).
    #[error("ill-conditioned matrix in {context}: condition estimate {cond:.3e}")]
    IllConditioned { context: &'static str, cond: f64 },

    /// A column had zero variance where standardization was requested.
    #[error("column {column} has zero variance and cannot be standardized")]
    ZeroVariance { column: usize },

    /// A non-finite value appeared where a finite one is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Invalid configuration (options, priors, thresholds).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A chain or sample collection was empty.
    #[error("empty chain: no stored draws")]
    EmptyChain,
}

impl Error {
    pub(crate) fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
