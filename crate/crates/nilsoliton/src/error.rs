//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index out of range in entry ({i},{j},{k}): dim is {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("duplicate structure constant for ({i},{j},{k})")]
    DuplicateEntry { i: usize, j: usize, k: usize },

    #[error("entry ({i},{j}) must have i < j")]
    BadEntryOrder { i: usize, j: usize },

    #[error("coefficient for ({i},{j}) is not finite or is zero")]
    BadCoefficient { i: usize, j: usize },

    #[error("matrix is singular (|det| = {det:.3e})")]
    Singular { det: f64 },

    #[error("two-form is degenerate (|det| = {det:.3e})")]
    Degenerate { det: f64 },

    #[error("operator is not symmetric (asymmetry {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("dimension must be even, got {dim}")]
    OddDimension { dim: usize },

    #[error("metric must be positive definite; entry {index} is {value}")]
    BadMetric { index: usize, value: f64 },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("expression error: {0}")]
    Expr(String),

    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
