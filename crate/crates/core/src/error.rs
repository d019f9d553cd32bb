use thiserror::Error;

/// Errors raised by the numerical and sampling APIs.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter combination violates a structural requirement, such as
    /// support disjointness of the two mixture families.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computed value overflowed to a non-finite number.
    #[error("range error: {0}")]
    Range(String),

    /// Quadrature or another iterative procedure failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Errors from decoding dataset, secret, oracle and report files.
///
/// Every variant maps to a distinct [`FormatError::code`] so callers can
/// tell a stale file from a damaged one.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic bytes: expected \"CLWF\"")]
    BadMagic,

    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("file truncated: needed {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("malformed manifest: {0}")]
    Manifest(String),

    #[error("invalid label byte {0} (expected -1 or +1)")]
    InvalidLabel(i8),

    #[error("{0} trailing bytes after checksum")]
    TrailingBytes(usize),

    #[error("secret digest mismatch")]
    DigestMismatch,

    #[error("wrong payload kind: expected {expected}, found {found}")]
    WrongPayload {
        expected: &'static str,
        found: &'static str,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl FormatError {
    /// Stable numeric code for each failure class.
    pub fn code(&self) -> u8 {
        match self {
            FormatError::BadMagic => 1,
            FormatError::VersionMismatch { .. } => 2,
            FormatError::Truncated { .. } => 3,
            FormatError::ChecksumMismatch { .. } => 4,
            FormatError::Manifest(_) => 5,
            FormatError::InvalidLabel(_) => 6,
            FormatError::TrailingBytes(_) => 7,
            FormatError::DigestMismatch => 8,
            FormatError::WrongPayload { .. } => 9,
            FormatError::Io(_) => 10,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {v}")))
    }
}

pub(crate) fn ensure_positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive and finite, got {v}")))
    }
}
