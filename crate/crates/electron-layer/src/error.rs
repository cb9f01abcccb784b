use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on operation inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration or parameter validation failed before any computation.
    #[error("validation error: {0}")]
    Validation(String),

    /// The time integrator detected NaN/overflow or amplitude blow-up.
    #[error("blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    /// Newton iteration failed to converge.
    #[error("Newton divergence after {iters} iterations, residual {residual:.3e}")]
    NewtonDiverged {
        iters: usize,
        residual: f64,
        history: Vec<f64>,
    },

    /// A homological or Jacobian solve hit a small divisor.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// Generic numerical failure (eigensolver, factorization).
    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
