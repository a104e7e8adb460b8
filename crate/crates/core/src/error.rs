use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FxError {
    #[error("invalid fixed-point format: {0}")]
    InvalidFormat(String),

    #[error("format mismatch: {left} vs {right}")]
    FormatMismatch { left: String, right: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("accumulator overflow: {terms} terms need {needed} bits, only 127 available")]
    AccumulatorOverflow { terms: usize, needed: u32 },

    #[error("{path}: {message}")]
    Idx { path: PathBuf, message: String },

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = FxError> = std::result::Result<T, E>;
