use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The requested separation cannot be realized inside the Sobolev ball.
    #[error("infeasible separation {delta}: at most 2R = {max} is attainable")]
    InfeasibleSeparation { delta: f64, max: f64 },

    #[error("insufficient samples: {hits} hits in the ball, need at least {needed}")]
    InsufficientSamples { hits: u64, needed: u64 },

    #[error("insufficient data: {usable} usable rows, need at least {needed}")]
    InsufficientData { usable: usize, needed: usize },

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv at line {line}: {message}")]
    Csv { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
