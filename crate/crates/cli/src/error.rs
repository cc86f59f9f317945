use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}: {source}")]
    Input {
        origin: String,
        #[source]
        source: cvtq_core::Error,
    },

    #[error("bad --centers value: {0}")]
    Centers(String),

    #[error(transparent)]
    Core(#[from] cvtq_core::Error),

    #[error("{0}")]
    Unsupported(String),

    #[error("{failed} of {total} reproduction rows failed")]
    Reproduction { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use cvtq_core::Error as E;
        let core = |e: &E| match e {
            E::Parse { .. } | E::InvalidInput(_) | E::Domain(_) => EXIT_PARSE,
            E::Unsupported(_) | E::TooLarge { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_FAILED,
        };
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Centers(_) => EXIT_PARSE,
            CliError::Input { source, .. } | CliError::Core(source) => core(source),
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Reproduction { .. } => EXIT_FAILED,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
