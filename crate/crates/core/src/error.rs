use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("infeasible oracle: {0}")]
    Infeasible(String),

    #[error("empty extreme-point list")]
    EmptyPointList,

    #[error("perturbation h must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid training setup: {0}")]
    InvalidTraining(String),

    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("covariance is not positive semidefinite (eigenvalue {0})")]
    NotPsd(f64),

    #[error("normalized regret undefined: optimal expected cost is zero")]
    ZeroDenominator,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
