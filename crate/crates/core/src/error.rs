use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order exceeds the dense bound {bound}; use chain mode")]
    DenseBoundExceeded { bound: usize },
    #[error("{0} needs a dense-mode group")]
    NeedsDenseMode(&'static str),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not a normal subgroup: {0}")]
    NotNormal(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires a nontrivial group")]
    TrivialGroup,
    #[error("generator images do not define a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("degenerate pair: B must be a proper subgroup of A")]
    DegeneratePair,
    #[error("not a chief factor: {0}")]
    NotChiefFactor(String),
    #[error("group is not simple")]
    NotSimple,
    #[error("group is not a direct power of a simple group")]
    NotDirectPower,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("derivation failed at level {level}: {reason}")]
    Derivation { level: usize, reason: String },
}
