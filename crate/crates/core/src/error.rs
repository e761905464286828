use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("singular substitution")]
    SingularSubstitution,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("parse error at offset {position} in {input:?}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not closed")]
    NotClosed,
    #[error("recursion singular at order {order}")]
    RecursionSingular { order: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
