use thiserror::Error;

/// Errors raised by field construction, code building and the searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{n}) exceeds backend capacity")]
    CapacityExceeded { p: u64, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete log of zero")]
    ZeroArgument,
    #[error("element is not in the subfield GF(q)")]
    NotInSubfield,
    #[error("{m} does not divide q^2-1 = {order}")]
    BadDivisor { m: u64, order: u64 },
    #[error("operation requires characteristic 2")]
    NotChar2,
    #[error("divisors {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("weight vanishes at shared point theta^{0}")]
    ZeroWeightAtSharedPoint(u64),
    #[error("no H in GF(q)* keeps every shared weight nonzero")]
    NoValidH,
    #[error("dimension {k} exceeds length {n}")]
    DimensionTooLarge { k: usize, n: usize },
    #[error("dimension {k} exceeds the admissible maximum {max}")]
    DimensionExceedsOracle { k: usize, max: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("weight sum vanishes at points lying in {0} subgroups")]
    WeightSumVanishes(u64),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("work {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid code dimensions: n = {n}, k = {k}")]
    InvalidDims { n: u64, k: u64 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("Hermitian Gram entry ({row}, {col}) is nonzero")]
    NotSelfOrthogonal { row: usize, col: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit status: 1 when the parameters fail a hypothesis, 2 for
    /// malformed input or exhausted limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_)
            | Error::BadDivisor { .. }
            | Error::NotChar2
            | Error::NotCoprime(..)
            | Error::ZeroWeightAtSharedPoint(_)
            | Error::NoValidH
            | Error::DimensionExceedsOracle { .. }
            | Error::HypothesisViolated(_)
            | Error::WeightSumVanishes(_)
            | Error::NotSelfOrthogonal { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
