use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Distinct categories for rejected `noffn` / `nofcol` / `nofcover` streams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("bad magic line: expected `{expected}`, found `{found}`")]
    BadMagic { expected: String, found: String },
    #[error("length mismatch: header promises {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("value {value} out of range at position {position} (must be < {bound})")]
    OutOfRange { position: usize, value: u64, bound: u64 },
    #[error("malformed stream: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "size budget exceeded: {entries} entries need {bytes} bytes, limit is {limit_bytes} bytes \
         (raise NOF_LIMIT_MB)"
    )]
    BudgetExceeded {
        entries: u128,
        bytes: u128,
        limit_bytes: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported dimension: expected dims = {expected}, found {found}")]
    UnsupportedDimension { expected: usize, found: usize },
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant broken at iteration {iteration}: {detail}")]
    InternalInvariant { iteration: usize, detail: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("report format version {found} is not supported (expected {expected}); migrate the file")]
    Migration { found: u64, expected: u64 },
    #[error("report parse error: {0}")]
    ReportParse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
