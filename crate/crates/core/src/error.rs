use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("symbol `{symbol}` has arity {expected}, got a tuple of length {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("coordinate {coord} outside universe of size {size}")]
    CoordinateOutOfRange { coord: usize, size: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("invalid lift: {0}")]
    InvalidLift(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("obstruction {index} is not a forest (cycle through elements {cycle:?})")]
    NotAForest { index: usize, cycle: Vec<usize> },

    #[error("guard exceeded: {what} needs {needed}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("formula violates restriction: {0}")]
    RestrictionViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("girth {girth} does not exceed threshold {threshold} (short cycle through {cycle:?})")]
    GirthTooSmall {
        girth: usize,
        threshold: usize,
        cycle: Vec<usize>,
    },

    #[error("no valid structure after {attempts} attempts: {reason}")]
    AttemptsExhausted { attempts: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        Err(Error::GuardExceeded {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}
