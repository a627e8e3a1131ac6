use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The annotation document is not well-formed JSON (or is missing
    /// required fields). `offset` is the byte position of the failure.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A reference inside the dataset points at a record that does not exist.
    #[error("integrity error: {message}")]
    Integrity { message: String },

    /// A mask or polygon is structurally invalid (run-sum mismatch, too few
    /// vertices, shape out of bounds, ...).
    #[error("geometry error: {message}")]
    Geometry { message: String },

    /// A mask has zero area. Carries the perimeter so callers can still
    /// report the shape; whether this is fatal is the caller's decision.
    #[error("degenerate mask: zero area (perimeter {perimeter})")]
    Degenerate { perimeter: f64 },

    /// The compressed counts string cannot be decoded.
    #[error("codec error: {message}")]
    Codec { message: String },

    /// A caller-supplied parameter is out of range.
    #[error("invalid argument: {message}")]
    Argument { message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 1 when the input cannot be read at
    /// all (parse, codec, I/O), 2 when it can be read but is invalid or the
    /// invocation itself is wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Codec { .. } | Error::Io(_) => 1,
            Error::Integrity { .. }
            | Error::Geometry { .. }
            | Error::Degenerate { .. }
            | Error::Argument { .. } => 2,
        }
    }

    pub(crate) fn integrity(message: impl Into<String>) -> Self {
        Error::Integrity { message: message.into() }
    }

    pub(crate) fn geometry(message: impl Into<String>) -> Self {
        Error::Geometry { message: message.into() }
    }

    pub(crate) fn codec(message: impl Into<String>) -> Self {
        Error::Codec { message: message.into() }
    }

    pub(crate) fn argument(message: impl Into<String>) -> Self {
        Error::Argument { message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
