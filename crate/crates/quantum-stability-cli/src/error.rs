//! Errors of the command-line front end and their exit codes.

use std::path::PathBuf;

use quantum_stability::ErrorKind;

/// Exit code for malformed or inconsistent configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for failed numerical certificates.
pub const EXIT_NUMERICAL: u8 = 3;
/// Exit code for non-generic flows and groupings.
pub const EXIT_NON_GENERIC: u8 = 4;
/// Exit code for file system failures.
pub const EXIT_IO: u8 = 1;

/// Failures of a CLI run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The configuration could not be parsed or is inconsistent.
    #[error("{0}")]
    Config(String),
    /// The library rejected the computation.
    #[error("{0}")]
    Core(#[from] quantum_stability::Error),
    /// Reading or writing a file failed.
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        /// The file involved.
        path: PathBuf,
        /// The underlying error.
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => EXIT_CONFIG,
                ErrorKind::Numerical => EXIT_NUMERICAL,
                ErrorKind::NonGeneric => EXIT_NON_GENERIC,
            },
            CliError::Io { .. } => EXIT_IO,
        }
    }

    /// One-line diagnostic prefixed with the error category.
    pub fn diagnostic(&self) -> String {
        let category = match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_NUMERICAL => "numerical",
            EXIT_NON_GENERIC => "non-generic",
            _ => "io",
        };
        format!("error ({category}): {self}")
    }
}
