use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer box with {assignments} assignments exceeds the cap of {cap}")]
    BoxTooLarge { assignments: u128, cap: u128 },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("instance validation failed: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
