use std::path::PathBuf;

use thiserror::Error;

use crate::assess::AssessError;
use crate::circuit::CircuitError;
use crate::simulator::SimulationError;
use crate::spec::SpecError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can surface to a caller.
///
/// User-facing variants (bad files, bad configuration) map to exit code 2;
/// the rest indicate a bug or a numeric fault and map to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] CircuitError),

    #[error(transparent)]
    Simulation(#[from] SimulationError),

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error(transparent)]
    Assess(#[from] AssessError),

    /// Wraps an error with the file it came from.
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("{}: {message}", path.display())]
    ConfigFile { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed manifest: {message}", path.display())]
    Manifest { path: PathBuf, message: String },

    #[error("{}: content hash {actual} does not match the manifest ({expected}); refusing to replay against a different {what}", path.display())]
    HashMismatch {
        path: PathBuf,
        what: &'static str,
        expected: String,
        actual: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_file(path: impl Into<PathBuf>, source: impl Into<Error>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(source.into()),
        }
    }

    /// Process exit code for this error: 2 for user errors, 3 for internal faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Simulation(SimulationError::NonFiniteAmplitude { .. })
            | Error::Assess(AssessError::UofNotChecked { .. })
            | Error::Internal(_) => 3,
            Error::File { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
