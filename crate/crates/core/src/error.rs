use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Input data violates a numerical precondition (non-finite, asymmetric).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),

    /// The pre-image iteration left the region where the Gaussian weights are
    /// representable.
    #[error("pre-image diverged at iteration {iteration}: denominator {denominator:e}, iterate {iterate:?}")]
    Divergence {
        iteration: usize,
        denominator: f64,
        iterate: Vec<f64>,
    },

    #[error("shape {index} is degenerate: zero {axis}-range")]
    DegenerateShape { index: usize, axis: char },

    #[error("sweep step {step}: {source}")]
    SweepStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
