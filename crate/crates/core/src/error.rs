use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameter or argument (bad L, N, alpha, overlapping sets, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested enumeration exceeds the configured cap.
    #[error("state space too large: |E_N| = {cardinality} exceeds cap {cap}")]
    SizeCap { cardinality: u128, cap: u128 },

    /// Vector length does not match the state-space dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A linear solve failed to reach the requested residual.
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
