use std::path::PathBuf;

use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// Bad input: unknown preset, unparsable or invalid configuration.
pub const EXIT_VALIDATION: u8 = 2;
/// A numerical routine failed to converge.
pub const EXIT_NUMERICAL: u8 = 3;
/// Reading or writing files failed.
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nhflip::Error),
    #[error("unknown preset `{0}`; expected one of fig2, fig3a, fig3b, fig4")]
    UnknownPreset(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use nhflip::Error as E;
        match self {
            CliError::Core(
                E::QuadratureNonConvergence(_) | E::ExtrapolationUnstable(_) | E::QRNonConvergence(_),
            ) => EXIT_NUMERICAL,
            CliError::Core(_) | CliError::UnknownPreset(_) | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
