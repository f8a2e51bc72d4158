use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent vector of length {found} does not match {expected} variables")]
    ArityMismatch { expected: usize, found: usize },

    #[error("clear power {clear_power} is below the substituted degree {degree}")]
    ClearPowerTooSmall { clear_power: u32, degree: u32 },

    #[error("substitution map entries do not share one denominator")]
    DenominatorMismatch,

    #[error("denominator vanishes identically at h = 0")]
    VanishingDenominator,

    #[error("constant term in h of the denominator is not a constant; series coefficients would not be polynomials")]
    NonPolynomialSeries,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("order must be at least {min}, got {got}")]
    InvalidOrder { min: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("coefficient functional is unknown above order {truncation}; order {requested} was requested")]
    Truncated { truncation: usize, requested: usize },

    #[error("B-series functional must equal 1 on the empty forest")]
    NotUnital,

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("polynomial degree {found} exceeds the allowed {allowed}")]
    DegreeTooHigh { allowed: u32, found: u32 },

    #[error("invalid vector field: {0}")]
    InvalidField(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("densities are all proportional; no nontrivial first integral")]
    NoNontrivialIntegral,

    #[error("no parameter independent measure at this order")]
    EmptyIntersection,

    #[error("alpha = -3 makes the conjectured h^4 coefficient singular")]
    SingularConjecture,

    #[error("basis is empty")]
    EmptyBasis,

    #[error("need at least {min} instances, got {got}")]
    TooFewInstances { min: usize, got: usize },

    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
