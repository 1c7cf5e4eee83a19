use thiserror::Error;

/// Errors raised while reading inputs or combining assignments with systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("symbol `{name}` used with arities {first} and {second}")]
    ArityConflict {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("rule {rule}: right-hand side variable `{var}` does not occur in the left-hand side")]
    UnboundVariable { rule: usize, var: String },
    #[error("rule {rule}: left-hand side argument `{arg}` is not a constructor pattern")]
    NonPatternLhs { rule: usize, arg: String },
    #[error("rule {rule}: left-hand side must be an application of a function symbol")]
    VariableLhs { rule: usize },
    #[error("no interpretation given for symbol `{0}`")]
    MissingSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("runtime complexity undefined at size {0}")]
    RcUndefined(u64),
    #[error("missing value for coefficient `{0}`")]
    MissingCoefficient(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
}

pub type Result<T> = std::result::Result<T, Error>;
