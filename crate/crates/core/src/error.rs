use thiserror::Error;

/// Errors raised while reading an instance or query file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `m u`")]
    MalformedHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: element {element} outside universe 1..={universe}")]
    ElementOutOfRange { line: usize, element: u64, universe: u32 },
    #[error("line {line}: set is not strictly increasing")]
    Unsorted { line: usize },
    #[error("expected {expected} set lines, found {found}")]
    SetCount { expected: usize, found: usize },
    #[error("line {line}: expected a pair `i j`")]
    MalformedPair { line: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("set index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no valid hash battery found within {rounds} rounds")]
    BatteryExhausted { rounds: usize },
    #[error("hash battery failed to resolve pair ({i}, {j})")]
    BatteryViolation { i: usize, j: usize },
    #[error("space budget of {budget} words is below the {required} words needed")]
    BudgetTooSmall { budget: u64, required: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
