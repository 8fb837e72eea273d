use thiserror::Error;

/// Errors raised by the pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed header: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("recording (participant {participant}, {label}) is missing t={t}")]
    MissingFrame { participant: u32, label: String, t: usize },

    #[error("recording (participant {participant}, {label}) has {rows} rows, expected 60")]
    FrameCount { participant: u32, label: String, rows: usize },

    #[error("duplicate row for participant {participant}, {label}, t={t}")]
    DuplicateRow { participant: u32, label: String, t: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("unsupported model document: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
