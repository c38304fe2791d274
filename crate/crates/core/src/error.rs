use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: no addresses found")]
    EmptyInput,

    /// Malformed line content. Line numbers are 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: expected {expected} bits, found {found}")]
    Format {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: value {value} does not fit in {width} bits")]
    Overflow {
        line: usize,
        value: String,
        width: usize,
    },

    #[error("{0}")]
    Domain(String),

    #[error("k = {k} exceeds the number of sets ({sets})")]
    InfeasibleK { k: usize, sets: usize },

    #[error("{0}")]
    Capacity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// An internal consistency check failed.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Document(err.to_string())
    }
}
