use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: mollow_core::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver { source, .. } if is_parameter_error(source) => 1,
            CliError::Solver { .. } | CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}

fn is_parameter_error(e: &mollow_core::Error) -> bool {
    use mollow_core::Error::*;
    matches!(
        e,
        InvalidParameter { .. } | InvalidTruncation | ManifoldExcluded(_) | InvalidGrid(_)
    )
}

/// Attaches scenario context to a core error.
pub trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for mollow_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| CliError::Solver {
            context: what(),
            source,
        })
    }
}
