use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: i64, base: u32 },

    #[error("digit set contains N-1 = {0}, which is excluded by convention")]
    ForbiddenTopDigit(u32),

    #[error("digit set has cardinality {got}, expected {expected}")]
    WrongCardinality { got: usize, expected: usize },

    #[error("selector returned an invalid digit set at level {level}: {reason}")]
    BadSelector { level: u32, reason: String },

    #[error("malformed interval: left endpoint exceeds right endpoint")]
    MalformedInterval,

    #[error("requested level {requested} exceeds built depth {depth}")]
    LevelTooDeep { requested: u32, depth: u32 },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("{0} is not a supported prime power (need q = p^k <= 16)")]
    UnsupportedPrimePower(u32),

    #[error("grid too coarse: need Nyquist frequency >= {needed}, grid resolves {available}")]
    Aliasing { needed: f64, available: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("geometry violates precondition: {0}")]
    GeometryConstraint(String),

    #[error("quadrature budget exceeded: requested {requested} nodes, cap {cap}")]
    QuadratureBudget { requested: usize, cap: usize },

    #[error("zero denominator in ratio (all-zero trial)")]
    ZeroDenominator,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
