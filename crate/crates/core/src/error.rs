use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: u64, bound: u64 },

    #[error("n = {n} exceeds capacity guard (max {max})")]
    Capacity { n: usize, max: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("degree is undefined for the zero function")]
    UndefinedDegree,

    #[error("operation requires a nonempty ordering set")]
    EmptySet,

    #[error("degenerate ratio: {0}")]
    Degenerate(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("set is not closed under inversion")]
    NotSymmetric,
}

pub type Result<T> = std::result::Result<T, Error>;
