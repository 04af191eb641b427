use thiserror::Error;

/// Crate-wide error type. Numeric "violations" (a minorant poking above its
/// indicator, a failed bound) are data carried in reports, not errors; this
/// enum is for contract breaches: bad inputs, failed brackets, dimension
/// mismatches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid band limit {0}: must be finite and positive")]
    InvalidBandLimit(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no sign change on bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("dimension {0} unsupported here: {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("sampling step {step} too coarse: need 1/step >= 2.5 to stay alias-free")]
    AliasingRisk { step: f64 },

    #[error("corner formula needs P(0)=1 and P(u_1)=0; got {0}")]
    NotInterpolating(String),

    #[error("algebraic identity failed: {0}")]
    AlgebraicIdentity(String),

    #[error("linear program: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
