use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("degenerate embedding: {0}")]
    DegenerateEmbedding(String),

    #[error("journey index {index} out of range [1, {len}]")]
    Index { index: usize, len: usize },

    #[error("malformed embedding data at byte offset {offset}: {reason}")]
    Format { offset: usize, reason: String },

    #[error("dataset error ({record}): {reason}")]
    Dataset { record: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("budget exhausted after {spent} acquisitions")]
    BudgetExhausted { spent: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {}: {source}", path.display())]
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

    pub(crate) fn dataset(record: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Dataset {
            record: record.into(),
            reason: reason.into(),
        }
    }

    /// Wraps the error with a description of where it happened.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all context layers peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors caused by bad configuration or input data rather
    /// than by a failure while running.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Config(_)
                | Error::Dataset { .. }
                | Error::Format { .. }
                | Error::Dimension { .. }
                | Error::DegenerateEmbedding(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
