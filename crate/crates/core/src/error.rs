use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("{path}: {source}")]
    Path {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// A rank-file or config line could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The vocabulary violates one of its structural invariants.
    #[error("vocabulary integrity: {0}")]
    Integrity(String),

    #[error("unknown token id {0}")]
    UnknownToken(u32),

    #[error("no vocabulary file for tier {tier}: {hint}")]
    VocabularyNotFound { tier: String, hint: String },

    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: usize },

    #[error("regex: {0}")]
    Regex(String),

    /// No sequence of vocabulary tokens covers the chunk.
    #[error("unsegmentable input: no token covers byte offset {offset}")]
    Unsegmentable { offset: usize },

    #[error("chunk of {len} bytes exceeds the brute-force bound of {bound} bytes")]
    ChunkTooLong { len: usize, bound: usize },

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("{0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed structured corpus record (json-lines in fail-fast mode).
    #[error("{uri}:{line}: {message}")]
    Record {
        uri: String,
        line: u64,
        message: String,
    },

    /// An internal invariant was broken, e.g. a corrupt backtracking chain.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn path(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Path {
            path: path.into(),
            source,
        }
    }

    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
