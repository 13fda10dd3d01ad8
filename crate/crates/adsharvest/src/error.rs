use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("pins file {}, line {line}: {reason}", path.display())]
    Pins {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Core(#[from] adsharvest_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}
