use thiserror::Error;

/// Errors raised by the library. Parsers report the byte offset of the failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground sets differ: [{0}] vs [{1}]")]
    GroundMismatch(usize, usize),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("expected an expression in the {expected} basis")]
    WrongBasis { expected: &'static str },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram matches no involution case: {0}")]
    Unclassified(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
