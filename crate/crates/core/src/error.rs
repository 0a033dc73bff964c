use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("elements belong to different cyclotomic fields (orders {left} and {right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("cannot mix exact and approximate scalars")]
    ModeMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("twist {index} equals 1")]
    TwistIsOne { index: usize },
    #[error("shift gives mu^a = 1")]
    MuPowerIsOne,
    #[error("|1 - mu^a| is too small for approximate arithmetic")]
    ApproxIllConditioned,
    #[error("factor {factor} is not a linear form with positive coefficients")]
    NotLinearForm { factor: usize },
    #[error("no factor depends on variable {variable}")]
    DependencyConditionViolated { variable: usize },
    #[error("square term {term} is not orthogonal to the shift")]
    OrthogonalityViolated { term: usize },
    #[error("factor {factor} vanishes where the series needs it to be positive")]
    FactorVanishes { factor: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
