use std::path::PathBuf;

/// Errors produced by the explanatory-space pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("corpus contains no non-empty document")]
    EmptyCorpus,

    #[error("unknown concept: {0}")]
    MissingConcept(String),

    #[error("formal context is empty")]
    EmptyContext,

    #[error("formal context has {objects} objects, above the configured bound of {limit}")]
    SizeLimit { objects: usize, limit: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed {what} at line {line}: {reason}")]
    Format { what: &'static str, line: usize, reason: String },

    #[error("embedder failure: {0}")]
    Embedder(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
