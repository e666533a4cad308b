use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SketchError>;

#[derive(Debug, Error)]
pub enum SketchError {
    #[error("{what} must be positive")]
    ZeroParameter { what: &'static str },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sketch length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("position {position} outside [1, {dim}]")]
    PositionOutOfRange { position: u64, dim: usize },

    #[error("indices must be strictly increasing (saw {prev} then {next})")]
    UnsortedIndices { prev: u32, next: u32 },

    #[error("bucket {bucket} outside [1, {num_buckets}]")]
    BucketOutOfRange { bucket: u32, num_buckets: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("result set mode mismatch")]
    ModeMismatch,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SketchError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SketchError::InvalidArgument(msg.into())
    }
}
