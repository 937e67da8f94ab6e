use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: size {len} is not a multiple of 8 bytes")]
    SizeMismatch { path: PathBuf, len: usize },
    #[error("{path}:{line}: cannot parse {text:?} as a double or 0x bit pattern")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error(transparent)]
    Sum(#[from] exactsum::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
