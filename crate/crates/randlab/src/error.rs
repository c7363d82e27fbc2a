use std::fmt;
use std::path::PathBuf;

/// Errors produced by generators, stream handling, the battery and reporting.
#[derive(Debug)]
pub enum Error {
    /// A caller-supplied parameter is out of range or inconsistent.
    Parameter(String),
    /// The input buffer or file is too small for the requested operation.
    Size {
        required: u64,
        available: u64,
        context: String,
    },
    /// A numeric argument fell outside the operation's domain.
    Domain(String),
    /// A bit or word read ran past the end of the buffer.
    EndOfStream {
        requested_bits: u64,
        position_bits: u64,
        length_bits: u64,
    },
    /// Filesystem failure, tagged with the path involved.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A report or data file could not be parsed.
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Size {
                required,
                available,
                context,
            } => write!(
                f,
                "size error: {context} requires {required} bytes, only {available} available"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::EndOfStream {
                requested_bits,
                position_bits,
                length_bits,
            } => write!(
                f,
                "end of stream: requested {requested_bits} bits at bit {position_bits} of {length_bits}"
            ),
            Error::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
