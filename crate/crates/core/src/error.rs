use std::path::PathBuf;

use thiserror::Error;

/// Error type shared by all pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("I/O error on {path}: {source}")]
    IoPath {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input data. `line` is 1-based; 0 means the whole file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A caller violated an operation's contract (bad partition, mismatched
    /// lengths, disconnected layout input, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Param(String),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    pub fn param(message: impl Into<String>) -> Self {
        Error::Param(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
