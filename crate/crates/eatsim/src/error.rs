use thiserror::Error;

/// Errors reported by this crate.
///
/// The three variants map onto the three failure classes surfaced by the
/// command-line tool: malformed input, semantically invalid input or
/// parameters, and numerical breakdown inside an otherwise valid computation.
#[derive(Debug, Error)]
pub enum Error {
    /// Input text could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A numerical routine failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
