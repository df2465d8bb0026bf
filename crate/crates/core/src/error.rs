use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown edge type `{0}`")]
    UnknownEdgeType(String),

    #[error("weight outside (0,1): {name} = {value}")]
    WeightOutOfRange { name: String, value: f64 },

    #[error("dangling sense reference `{key}` at {path}:{line}")]
    DanglingSense {
        key: String,
        path: PathBuf,
        line: usize,
    },

    #[error("sense `{0}` is not in the thesaurus")]
    UnknownSense(String),

    #[error("sense `{0}` has no depth")]
    MissingDepth(String),

    #[error("measure `{0}` needs an information-content table")]
    MissingIcTable(&'static str),

    #[error("no probability for sense `{0}` in the information-content table")]
    MissingIc(String),

    #[error("graph has {senses} senses; exhaustive enumeration is limited to {limit}")]
    OracleTooLarge { senses: usize, limit: usize },

    #[error("term `{term}` does not occur in text `{text}`")]
    TermNotInText { term: String, text: String },

    #[error("empty text")]
    EmptyText,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cache format: {0}")]
    CacheFormat(String),

    #[error("cache was built for a different thesaurus (fingerprint mismatch)")]
    FingerprintMismatch,

    #[error("i/o error on {path}: {source}")]
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

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
