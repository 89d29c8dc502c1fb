use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qcontrol::Error),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: qcontrol::Error,
    },

    #[error("unknown case `{0}` (see `qcontrol reproduce --list`)")]
    UnknownCase(String),

    #[error("{0}")]
    Usage(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("write: {0}")]
    Write(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
