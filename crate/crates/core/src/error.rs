use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants are grouped by [`ErrorKind`], which is what the command-line
/// front end turns into exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {dim} exceeds the bound {bound} for {operation}")]
    TooLarge {
        operation: &'static str,
        dim: usize,
        bound: usize,
    },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has eigenvalue {eigenvalue:e} below the clamping tolerance")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("matrix is not a contraction (operator norm {norm})")]
    NotAContraction { norm: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not real orthogonal (max deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("exponent 2^{exponent} is out of range")]
    ExponentOutOfRange { exponent: u32 },

    #[error("cannot encode {n_particles} particles: {reason}")]
    Encoding { n_particles: usize, reason: String },

    #[error("state needs {required} qubits, cap is {cap}")]
    StateTooLarge { required: u32, cap: u32 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sampled outcomes disagree: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse classification used for exit codes and machine-readable tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Verification,
    ResourceCap,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::StateTooLarge { .. } | Error::TooLarge { .. } => ErrorKind::ResourceCap,
            Error::Inconsistent(_) => ErrorKind::Verification,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    /// Short kebab-case tag, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not-square",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::TooLarge { .. } => "too-large",
            Error::NonFinite { .. } => "non-finite",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NegativeEigenvalue { .. } => "negative-eigenvalue",
            Error::NotAContraction { .. } => "not-a-contraction",
            Error::NotUnitary { .. } => "not-unitary",
            Error::NotOrthogonal { .. } => "not-orthogonal",
            Error::ExponentOutOfRange { .. } => "exponent-out-of-range",
            Error::Encoding { .. } => "encoding",
            Error::StateTooLarge { .. } => "state-too-large",
            Error::InvalidState(_) => "invalid-state",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Inconsistent(_) => "inconsistent",
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
        }
    }
}
