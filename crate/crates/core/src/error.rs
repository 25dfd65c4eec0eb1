use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: p = {p} must be prime, e = {e} must be >= 1 and p^e at most 65536")]
    InvalidField { p: u32, e: u32 },
    #[error("ring is not Artinian: {0}")]
    NotArtinian(String),
    #[error("generators do not form a regular sequence: {0}")]
    NotRegularSequence(String),
    #[error("generator is not homogeneous: {0}")]
    NonHomogeneous(String),
    #[error("polynomial is not in the ideal: {0}")]
    NotInIdeal(String),
    #[error("lifted square of the differential is not divisible by the regular sequence in degree {degree}")]
    DivisionFailure { degree: i64 },
    #[error("could not splice the complete resolution: {0}")]
    SpliceFailure(String),
    #[error("window [{lo}, {hi}] is too narrow: {reason}")]
    TooNarrow { lo: i64, hi: i64, reason: String },
    #[error("degree {degree} outside window [{lo}, {hi}]")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero linear form cannot be used")]
    ZeroForm,
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
