use thiserror::Error;

/// Errors raised by the library. Failed *checks* are never errors: they are
/// reported as data by the operation that performs them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("substitution needs a nilpotent constant term")]
    NonNilpotentConstant,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("search space of {size} candidates exceeds the ceiling {ceiling}")]
    SearchTooLarge { size: String, ceiling: String },
    #[error("group closure exceeds bound {0}")]
    ClosureTooLarge(usize),
    #[error("arithmetic check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
