use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Referential(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("({category}, {dimension}): {source}")]
    Analysis {
        category: String,
        dimension: String,
        source: duelbias_core::Error,
    },

    #[error(transparent)]
    Core(#[from] duelbias_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit code for bad input.
pub const EXIT_VALIDATION: u8 = 2;
/// Process exit code for a numerical failure (non-convergence, unstable bootstrap).
pub const EXIT_NUMERICAL: u8 = 3;
/// Process exit code for failures writing output.
pub const EXIT_IO: u8 = 1;

impl Error {
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Analysis { source, .. } | Error::Core(source) if source.is_numerical() => EXIT_NUMERICAL,
            Error::Write { .. } => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }

    pub(crate) fn in_context(category: &str, dimension: &str, source: duelbias_core::Error) -> Self {
        Error::Analysis { category: category.to_owned(), dimension: dimension.to_owned(), source }
    }
}
