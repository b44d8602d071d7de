//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two rows/points with identical coordinates. Indices are 0-based
    /// positions in the originating sequence (data rows for CSV input).
    #[error("duplicate points at rows {first} and {second}")]
    DuplicatePoints { first: usize, second: usize },

    #[error("empty candidate set")]
    EmptyCandidateSet,

    #[error("candidate set has no target values")]
    MissingValues,

    /// A (regularized) kernel matrix failed to factorize: the pivot fell at
    /// or below the positivity threshold. In the greedy loop this signals an
    /// exhausted basis and is handled as a stopping condition.
    #[error("matrix not positive definite")]
    NotPositiveDefinite,

    #[error("singular triangular factor (zero diagonal)")]
    SingularFactor,

    #[error("no unselected candidate left")]
    Exhausted,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported schema version {found} (this reader supports {supported})")]
    SchemaVersion { supported: u32, found: u32 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
