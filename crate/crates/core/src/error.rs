use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("image dimensions must be positive")]
    ZeroDimension,
    #[error("buffer length {got} does not match {expected} for the given dimensions")]
    BufferLength { expected: usize, got: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("probability value {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("gamma must be positive and finite, got {0}")]
    NonPositiveGamma(f64),
    #[error("evaluation region is empty")]
    EmptyEvaluationRegion,
    #[error("evaluation region contains only one class ({positives} positives, {negatives} negatives)")]
    DegenerateLabels { positives: u64, negatives: u64 },
    #[error("ground truth has no foreground pixels")]
    EmptyGroundTruth,
    #[error("unknown dataset: {0}")]
    UnknownDataset(String),
    #[error("image {0} has no matching ground truth")]
    MissingPair(String),
    #[error("malformed config: {0}")]
    Config(String),
    #[error("malformed container: {0}")]
    Container(String),
    #[error("malformed lut: {0}")]
    Lut(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }
}
