//! Error type shared by all simulator modules.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Config file could not be parsed.
    ConfigParse { line: usize, message: String },
    /// Config parsed but violates a device invariant.
    ConfigValidation { message: String },
    /// A physics operation was called outside its domain.
    Domain { message: String },
    /// Trace file could not be parsed.
    TraceParse { line: usize, message: String },
    /// Trace timestamps are not non-decreasing.
    TraceOrder { line: usize, message: String },
    /// Address outside the configured device capacity.
    AddressOutOfRange { address: u64, capacity: u64 },
    /// A module precondition was violated by its caller.
    Precondition { message: String },
    /// Power state machine received a command that is illegal in the
    /// current state.
    IllegalTransition { state: &'static str, command: &'static str },
    /// Simulator-internal consistency failure (a bug, not user input).
    Internal { message: String },
    /// Compare mode was given mismatched inputs.
    CompareMismatch { message: String },
    Io(std::io::Error),
}

impl Error {
    pub fn internal(message: impl Into<String>) -> Self {
        Error::Internal {
            message: message.into(),
        }
    }

    /// True for errors that indicate a simulator bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal { .. } | Error::IllegalTransition { .. } | Error::Precondition { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ConfigParse { line, message } => {
                write!(f, "config parse error at line {line}: {message}")
            }
            Error::ConfigValidation { message } => {
                write!(f, "config validation error: {message}")
            }
            Error::Domain { message } => write!(f, "domain error: {message}"),
            Error::TraceParse { line, message } => {
                write!(f, "trace parse error at line {line}: {message}")
            }
            Error::TraceOrder { line, message } => {
                write!(f, "trace order error at line {line}: {message}")
            }
            Error::AddressOutOfRange { address, capacity } => {
                write!(f, "address {address:#x} outside capacity {capacity:#x}")
            }
            Error::Precondition { message } => write!(f, "precondition violated: {message}"),
            Error::IllegalTransition { state, command } => {
                write!(f, "illegal power transition: {command} in state {state}")
            }
            Error::Internal { message } => write!(f, "internal error: {message}"),
            Error::CompareMismatch { message } => write!(f, "compare mismatch: {message}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
