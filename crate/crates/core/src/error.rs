use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported or malformed image: {0}")]
    Format(String),

    #[error("invalid image dimensions {width}x{height}")]
    Dimensions { width: usize, height: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor is not positive semi-definite at pixel ({x}, {y})")]
    NotPositiveSemiDefinite { x: usize, y: usize },

    #[error("every co-occurrence offset was degenerate")]
    DegenerateTexture,

    #[error("no usable images: {} file(s) failed", failures.len())]
    EmptyDataset {
        failures: Vec<crate::dataset::FailureRecord>,
    },

    #[error("malformed table: {0}")]
    Table(String),

    #[error("arity mismatch: expected {expected} attributes, got {actual}")]
    Arity { expected: usize, actual: usize },

    #[error("non-finite attribute value at index {0}")]
    NonFinite(usize),

    #[error("unknown class label {0:?}")]
    UnknownClass(String),

    #[error("unknown learner {0:?}")]
    UnknownLearner(String),

    #[error("model format version {found} is not supported (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },

    #[error("corrupt model payload: {0}")]
    CorruptModel(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
