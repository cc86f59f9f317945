use thiserror::Error;

/// Errors raised by the geometry, region and quantization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("unsupported moment degree {px}+{py}; exact polygon moments stop at total degree 2")]
    UnsupportedDegree { px: u32, py: u32 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("{m} points exceed the exact-solver guard of {max}; use discrete Lloyd instead")]
    TooLarge { m: usize, max: usize },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
