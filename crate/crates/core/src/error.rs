use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("node {node} out of range (node_count = {node_count})")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no exceedances above threshold {threshold}")]
    NoExceedances { threshold: f64 },

    #[error("insufficient exceedances above {threshold}: need at least 2, found {found}")]
    TooFewExceedances { threshold: f64, found: usize },

    #[error("degenerate estimate: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable category, stable across versions.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::EmptyInput(_) => "parse",
            Error::NodeOutOfRange { .. } | Error::InvalidParameter(_) => "usage",
            Error::NoExceedances { .. }
            | Error::TooFewExceedances { .. }
            | Error::Degenerate(_) => "estimation",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
