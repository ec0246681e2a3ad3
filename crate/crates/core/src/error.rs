use thiserror::Error;

/// Every failure the library can report. Each variant maps to a distinct
/// machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("subgroup has rank 0; a minimal vector needs rank >= 1")]
    RankTooLow,
    #[error("malformed family: {0}")]
    MalformedFamily(String),
    #[error("sheet {sheet} does not divide {n}")]
    InvalidSheet { n: i64, sheet: i64 },
    #[error("chart position must be >= 1")]
    InvalidPosition,
    #[error("not an exact rational: {0:?}")]
    NonRationalInput(String),
    #[error("inconsistent descriptor: {0}")]
    InconsistentDescriptor(String),
    #[error("ambient groups differ: {0}")]
    MismatchedAmbient(String),
    #[error("Teichmueller lifts are defined for odd primes only")]
    EvenPrime,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("quotient resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("finite subgroups have no residual coordinate")]
    FiniteInput,
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("window level {level} exceeds the cap {cap}")]
    LevelCap { level: u32, cap: u32 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::RankTooLow => "RANK_TOO_LOW",
            Error::MalformedFamily(_) => "MALFORMED_FAMILY",
            Error::InvalidSheet { .. } => "INVALID_SHEET",
            Error::InvalidPosition => "INVALID_POSITION",
            Error::NonRationalInput(_) => "NON_RATIONAL_INPUT",
            Error::InconsistentDescriptor(_) => "INCONSISTENT_DESCRIPTOR",
            Error::MismatchedAmbient(_) => "MISMATCHED_AMBIENT",
            Error::EvenPrime => "EVEN_PRIME",
            Error::InsufficientPrecision(_) => "INSUFFICIENT_PRECISION",
            Error::ResolutionTooCoarse(_) => "RESOLUTION_TOO_COARSE",
            Error::FiniteInput => "FINITE_INPUT",
            Error::Constraint(_) => "CONSTRAINT_ERROR",
            Error::Schema { .. } => "SCHEMA_ERROR",
            Error::LevelCap { .. } => "LEVEL_CAP",
            Error::Io(_) => "IO_ERROR",
        }
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedFamily(msg.into())
    }

    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        Error::Constraint(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
