//! Experiment driver for the `nmim` crate: source ingestion and generation,
//! sweeps over the library's operations, and CSV/JSON output.
//!
//! Exit codes: 0 success, 2 input validation, 3 numerical infeasibility, 4 I/O.
//!
//! `NMIM_SEED` is reserved for future stochastic features and is currently
//! ignored: every command is deterministic.

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod grid;
pub mod source;
pub mod table;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<nmim::NmimError> for CliError {
    fn from(e: nmim::NmimError) -> Self {
        if e.is_infeasibility() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub use args::{Cli, Command};
pub use commands::run;
