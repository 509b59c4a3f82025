use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),

    #[error(transparent)]
    Core(#[from] genent::Error),

    #[error("cannot read {path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_SPEC: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

impl CliError {
    /// 3 when the request is well formed but exceeds what can be computed,
    /// 2 for every other failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                genent::Error::Resource { .. }
                | genent::Error::NoConvergence(_)
                | genent::Error::SectorCheck { .. },
            ) => EXIT_RESOURCE,
            _ => EXIT_SPEC,
        }
    }
}

pub(crate) fn spec(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}
