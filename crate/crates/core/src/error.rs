use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order {0} is not a prime power")]
    OrderNotPrimePower(u64),
    #[error("field order {0} has characteristic 2 (pass allow_even to override)")]
    EvenCharacteristic(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("direction vectors have rank {rank}, expected {expected}")]
    DegenerateSpan { rank: usize, expected: usize },
    #[error("invalid flat dimension k={k} in ambient dimension d={d}")]
    InvalidDimension { d: usize, k: usize },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("size budget exceeded: {0}")]
    TooLarge(String),
    #[error("pair rank is undefined for identical flats")]
    IdenticalFlats,
    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| exceeds tolerance")]
    NotSymmetric { row: usize, col: usize },
    #[error("subset index {index} out of range for part of size {size}")]
    BadSubset { index: usize, size: usize },
    #[error("graph invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
