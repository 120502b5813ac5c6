//! Error type shared by the command implementations, carrying both the
//! machine-readable code reported in error documents and the process exit
//! status.

use std::fmt;

/// Exit status for malformed invocations, manifests, or input text.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for inputs that parse but violate an operation's contract.
pub const EXIT_PRECONDITION: i32 = 3;
/// Exit status for searches that complete without finding a certificate.
pub const EXIT_SEARCH: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Problems with flags, manifest structure, or missing inputs.
    Usage(String),
    /// An error surfaced by the library.
    Math(minderiv::Error),
    /// A library error with a note saying which input triggered it.
    Context(String, minderiv::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Math(e) | CliError::Context(_, e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Math(e) | CliError::Context(_, e) => match e.code() {
                "syntax" | "unknown-variable" | "invalid-ring" => EXIT_USAGE,
                "no-minimal-m" | "fold-failed" => EXIT_SEARCH,
                _ => EXIT_PRECONDITION,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Math(e) => write!(f, "{e}"),
            CliError::Context(context, e) => write!(f, "{context}: {e}"),
        }
    }
}

impl From<minderiv::Error> for CliError {
    fn from(e: minderiv::Error) -> Self {
        CliError::Math(e)
    }
}
