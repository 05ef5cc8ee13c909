use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order k = {k} is out of range (k must be at least 2)")]
    OrderOutOfRange { k: i64 },

    #[error("index n = {n} is outside the domain n >= 2 - k = {min} for k = {k}")]
    IndexOutOfRange { k: usize, n: i64, min: i64 },

    #[error("precision {bits} bits is below the minimum of {min}")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("failed to isolate the dominant root for k = {k}")]
    RootIsolation { k: usize },

    #[error("root iteration for k = {k} did not converge; worst residual {worst_residual:e}")]
    RootConvergence { k: usize, worst_residual: f64 },

    #[error("root {index} for k = {k} is not strictly inside the unit circle")]
    UnitCircle { k: usize, index: usize },

    #[error("argument enclosure touches the pole of the coefficient function for k = {k}")]
    PoleProximity { k: usize },

    #[error("denominator 2 z^k - (k + 1) is degenerate for k = {k}")]
    DegenerateDenominator { k: usize },

    #[error("interval divisor contains zero")]
    DivisionByZeroInterval,

    #[error("expected a root set of order {expected}, found {found}")]
    WrongOrder { expected: usize, found: usize },

    #[error("could not certify rounding for k = {k}, n = {n} within {cap} bits")]
    CertificationFailure { k: usize, n: i64, cap: u32 },

    #[error("error bound |E_n| < 1/2 not certified at n = {n} (precision too low?)")]
    Uncertified { n: i64 },

    #[error("malformed range: {0}")]
    MalformedRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible quadratic fields Q(sqrt({0})) and Q(sqrt({1}))")]
    IncompatibleSurds(u64, u64),
}
