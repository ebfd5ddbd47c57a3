use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: at {pointer}: {message}")]
    Spec {
        origin: String,
        pointer: String,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] locclab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("trace requires Weyl-typed unitaries; {0} is given as a matrix")]
    NotWeyl(String),
    #[error("internal contradiction: {0}")]
    Contradiction(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
