//! Error types for profile ingestion, plan validation, and solving.

use thiserror::Error;

/// Rejections raised while building or parsing a [`LayerProfile`](crate::LayerProfile).
#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile document is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("profile needs at least 2 entries (the input plus one layer), got {0}")]
    TooShort(usize),
    #[error("layer {name:?}: output shape is empty")]
    EmptyShape { name: String },
    #[error("layer {name:?}: output shape contains a zero dimension")]
    ZeroDimension { name: String },
    #[error("layer {name:?}: activation size is zero")]
    ZeroSize { name: String },
    #[error("layer {name:?}: needs either size_bytes or shape plus bytes_per_element")]
    MissingSize { name: String },
    #[error("layer {name:?}: size_bytes conflicts with shape fields; give one or the other")]
    ConflictingSize { name: String },
    #[error("profile totals {total} bytes, over the 2^62 accounting limit")]
    TooLarge { total: u128 },
    #[error("{0}")]
    BadParameter(&'static str),
}

/// Rejections raised while validating a checkpoint plan.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("checkpoint plan is empty")]
    Empty,
    #[error("checkpoint plan must start at index 0, got {0}")]
    MissingStart(usize),
    #[error("checkpoint plan must end at the last index {last}, got {got}")]
    MissingEnd { last: usize, got: usize },
    #[error("checkpoint indices must increase strictly, got {prev} then {next}")]
    NotIncreasing { prev: usize, next: usize },
    #[error("checkpoint index {index} is out of range for last index {last}")]
    OutOfRange { index: usize, last: usize },
}

/// Rejections raised by solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("chain of {layers} layers is over the exhaustive-search limit of {limit}")]
    TooLarge { layers: usize, limit: usize },
}
