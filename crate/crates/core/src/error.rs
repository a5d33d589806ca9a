use std::path::Path;

/// Errors produced by the tracking engine and its tooling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("evaluation protocol error: {0}")]
    Protocol(String),
}

impl Error {
    /// Stable machine-parsable category name, used in CLI error lines.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Geometry(_) => "geometry",
            Error::Dimension(_) => "dimension",
            Error::Config(_) => "config",
            Error::Numeric(_) => "numeric",
            Error::Dataset(_) => "dataset",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Protocol(_) => "protocol",
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
