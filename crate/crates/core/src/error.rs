use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("shape mismatch: expected {expected} values, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("window `{label}` is not admissible: {reason}")]
    Inadmissible { label: String, reason: String },

    #[error("unknown {kind} `{name}`; expected one of: {options}")]
    Unknown {
        kind: &'static str,
        name: String,
        options: String,
    },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed WRS1 data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
