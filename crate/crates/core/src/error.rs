use alloc::string::String;

/// Errors raised by constructors and checks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{p}^{precision} does not fit in 62 bits")]
    ModulusTooLarge { p: u64, precision: u32 },
    #[error("element is not a unit modulo p")]
    NotAUnit,
    #[error("matrix is singular modulo p")]
    SingularModP,
    #[error("variable layouts differ")]
    LayoutMismatch,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("negative exponent at a non-unit coordinate")]
    NonUnitAtNegativeExponent,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("unsupported dimension: {0}")]
    DimensionUnsupported(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no domain point found after {0} attempts")]
    SearchExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
