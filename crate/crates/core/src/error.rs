use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} exceeds construction bound {max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("element is not a cycle: its boundary is nonzero at {label}")]
    NotACycle { label: String },

    #[error("slot arity mismatch: expected {expected}, got {got}")]
    SlotMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("method inapplicable: {0}")]
    MethodInapplicable(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
