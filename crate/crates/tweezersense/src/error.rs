//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TweezerError {
    /// Two fields live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation mixed objective-plane and image-plane fields.
    #[error("plane mismatch: {0}")]
    PlaneMismatch(String),

    /// A field with (numerically) zero norm where a direction is required.
    #[error("degenerate input: {0}")]
    DegenerateField(String),

    /// Grid construction or sizing violates an invariant.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A physical parameter or run configuration is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A precondition on an operation argument failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No signal mode exists (zero derivative field).
    #[error("no signal mode: {0}")]
    NoSignalMode(String),

    /// A validation check failed (used by the `validate` command).
    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}
