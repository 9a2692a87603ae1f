use thiserror::Error;

/// Errors raised by expression parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by the zero polynomial at position {pos}")]
    DivisionByZero { pos: usize },
}

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("witness not invertible")]
    NotInvertible,
    #[error("polynomial of degree {degree} exceeds the factorization limit {limit}")]
    DegreeLimit { degree: usize, limit: usize },
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("structure maps do not restrict: {0}")]
    NotRestrictable(String),
    #[error("dimension defect: expected {expected}, found {found}")]
    DimensionDefect { expected: usize, found: usize },
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
