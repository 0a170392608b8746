use alloc::string::String;

/// Errors raised by the exact kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the zero polynomial has no roots to isolate")]
    ZeroPolynomial,
    #[error("basis is rank deficient (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("field is not totally real: {0}")]
    NotTotallyReal(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("span is not closed under multiplication")]
    NotAnAlgebra,
    #[error("algebra is not semisimple (nilpotent element found)")]
    NotSemisimple,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sequence too short: need {needed} digits, have {available}")]
    Truncated { needed: usize, available: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
