use std::fmt;
use std::io::ErrorKind;

use clwe_core::{Error, FormatError};

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Check(String),
    Param(String),
    Io(String),
    Missing(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Param(_) => 2,
            CliError::Io(_) => 3,
            CliError::Missing(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Param(m) => write!(f, "parameter error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Missing(m) => write!(f, "missing artifact: {m}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match &e {
            FormatError::Io(io) if io.kind() == ErrorKind::NotFound => CliError::Missing(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(f) => f.into(),
            Error::Numeric(m) => CliError::Check(m),
            other => CliError::Param(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e).into()
    }
}
