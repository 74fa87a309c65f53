use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order v={0}: order must be odd and at least 1")]
    InvalidOrder(i64),

    #[error("order {requested} exceeds the exact-arithmetic limit of {limit}")]
    OverflowRisk { requested: usize, limit: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("no eigenvalue within {tolerance:e} of 1 (closest: {closest})")]
    EigenFailure { tolerance: f64, closest: f64 },

    #[error("length error: {0}")]
    LengthError(String),

    #[error("unsupported boundary mode `{0}` (only `periodic` is available)")]
    UnsupportedBoundary(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }
}
