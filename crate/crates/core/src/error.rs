use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime >= 5")]
    InvalidField(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("enumeration of {needed} elements exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error("gave up after {0} retries")]
    RetriesExhausted(u32),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed proof: {0}")]
    MalformedProof(String),

    #[error("instance is 0-1 satisfiable")]
    NotUnsat,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no object satisfying the request was found")]
    NotFound,

    #[error("no path prefix reaches the requested support size")]
    NeverReached,

    #[error("illegal move: {0}")]
    IllegalMove(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
