use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in finite field")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("value {value} is not a canonical encoding for a field of size {q}")]
    InvalidEncoding { value: u64, q: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("repeated abscissa in interpolation points")]
    RepeatedAbscissa,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not in shifted weak Popov form")]
    NotWeakPopov,
    #[error("function has a pole at the requested place")]
    Pole,
    #[error("precision must be positive")]
    InvalidPrecision,
    #[error("invalid backend: {0}")]
    InvalidBackend(String),
    #[error("insufficient rational places: need {needed}, only {available} available")]
    InsufficientPlaces { needed: usize, available: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration of {candidates} candidates exceeds cap {cap}")]
    EnumerationCap { candidates: u128, cap: u128 },
    #[error("radius too large for parameters: interpolant has delta {delta}, bound is {bound}")]
    RadiusTooLarge { delta: i64, bound: i64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
