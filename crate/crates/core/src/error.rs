use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A quantity that must be real, Hermitian or normalized drifted beyond tolerance.
    #[error("numeric integrity error: {0}")]
    NumericIntegrity(String),

    /// Exhaustive or dense computations that would exceed the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Inputs the reduction deliberately does not handle (answered upstream).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("rational overflow while computing {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by numbers drifting rather than by bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NumericIntegrity(_) | Error::Overflow(_))
    }
}
