//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by any `pointcert` operation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible dimensions: {0} vs {1}")]
    IncompatibleDimensions(usize, usize),

    #[error("non-finite coordinate")]
    NonFiniteCoordinate,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty cloud")]
    EmptyCloud,

    #[error("subsample larger than cloud: k={k}, n={n}")]
    SubsampleTooLarge { k: usize, n: usize },

    #[error("instance too large for oracle: C({n},{k}) exceeds {limit}")]
    OracleTooLarge { n: usize, k: usize, limit: u64 },

    #[error("while classifying subsample {index}: {source}")]
    ClassifyAt {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config: {0}")]
    Config(String),

    #[error("unknown shape id: {0:?}")]
    UnknownShape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
