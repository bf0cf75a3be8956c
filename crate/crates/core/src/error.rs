use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible sample spaces: {0} vs {1}")]
    IncompatibleSpaces(String, String),

    #[error("grid density integrates to {0}, expected 1")]
    NotNormalized(f64),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("prior configuration rejected: {0}")]
    PriorConfig(String),

    #[error("posterior mass {mass:.3e} at the grid boundary; widen the grid")]
    GridBoundary { mass: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
