use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u32),
    #[error("characteristic {0} exceeds 2^16")]
    CharacteristicTooLarge(u32),
    #[error("extension degree {0} outside 1..=12")]
    BadDegree(usize),
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: usize },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("elements from different fields combined")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("0^0 is undefined")]
    ZeroToZero,
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("genus {genus} exceeds cap {cap}")]
    GenusCap { genus: usize, cap: usize },
    #[error("branch points not rational over the working field; extend the field (e.g. --extend)")]
    NonRationalBranch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("branch loci overlap")]
    OverlappingBranch,
    #[error("field degree {sub} does not divide {sup}")]
    NotSubfield { sub: usize, sup: usize },
    #[error("point counts inconsistent with an L-polynomial: {0}")]
    InconsistentCounts(String),
    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
