use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty denominator set")]
    EmptyDenominatorSet,

    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("coweight is not weakly decreasing: {0:?}")]
    NotDominant(Vec<i64>),

    #[error("unbalanced weights: sum of e_i = {sum} is not divisible by d = {d}")]
    UnbalancedWeights { sum: usize, d: usize },

    #[error("invalid balancing input: {0}")]
    InvalidDelta(String),

    #[error("balancing did not converge: {0}")]
    BalanceDiverged(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("rank mismatch: expected d = {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("unknown place {0:?}")]
    UnknownPlace(String),

    #[error("invalid place: {0}")]
    InvalidPlace(String),

    #[error("Π not principal: sum of deg_y(Π) is {0}, expected 0")]
    NotPrincipal(String),

    #[error("not realizable as a simple (D,φ)-space: {0}")]
    NotRealizable(String),

    #[error("invalid extension shape: {0}")]
    InvalidExtension(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("missing idele degree")]
    MissingIdeleDegree,

    #[error("legs meet Y at {0:?}")]
    LegsMeetY(Vec<String>),

    #[error("Y is not contained in Ram(D): {0:?}")]
    NotRamified(Vec<String>),

    #[error("m = {m} is out of range for d = {d}")]
    MOutOfRange { m: usize, d: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
