use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside a function's domain (e.g. non-positive polygamma input).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A data matrix entry that cannot belong to the open simplex.
    #[error("invalid data at row {row}, column {col}: value {value} {reason}")]
    InvalidEntry {
        row: usize,
        col: usize,
        value: f64,
        reason: String,
    },

    #[error("row {row} sums to {sum}, expected 1 within {tol}")]
    RowSum { row: usize, sum: f64, tol: f64 },

    /// Expected information lost positive definiteness numerically.
    #[error("expected information is numerically not positive definite")]
    NotPositiveDefinite,

    /// The parameter sum ran past the divergence guard (unbounded likelihood).
    #[error("iteration diverged: parameter sum {s} exceeded cap {cap}")]
    Diverged { s: f64, cap: f64 },

    /// Step halving could not reduce the adjusted score norm.
    #[error("no progress after {halvings} step halvings at iteration {iteration}")]
    NoProgress { iteration: usize, halvings: usize },

    /// Iteration budget exhausted; carries the last iterate for diagnosis.
    #[error("no convergence in {iterations} iterations (final score norm {score_norm:e})")]
    MaxIterations {
        iterations: usize,
        last_iterate: Vec<f64>,
        score_norm: f64,
    },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("{0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}
