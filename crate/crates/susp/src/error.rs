use thiserror::Error;

use crate::expr::Path;
use crate::rewrite::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid path {0}")]
    InvalidPath(Path),
    #[error("expected a {expected} at {path}")]
    Category { path: Path, expected: &'static str },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("natural subtraction underflow: {0} - {1}")]
    Underflow(usize, usize),
    #[error("rule {rule} does not apply at {path}")]
    NoMatch { rule: RuleId, path: Path },
    #[error("index {index} out of range for environment of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("environment is not simple")]
    NotSimple,
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Natural-number subtraction truncated at zero.
pub fn monus(a: usize, b: usize) -> usize {
    a.saturating_sub(b)
}

pub fn add(a: usize, b: usize) -> Result<usize> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// Subtraction where the result must stay natural.
pub fn sub(a: usize, b: usize) -> Result<usize> {
    a.checked_sub(b).ok_or(Error::Underflow(a, b))
}

pub(crate) fn plus(a: usize, b: usize) -> usize {
    a.checked_add(b).expect("embedding level overflow")
}
