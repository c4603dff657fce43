use std::io;
use std::path::PathBuf;

use dxz_core::DxzError;
use thiserror::Error;

pub const SUCCESS: u8 = 0;
/// A check ran and failed (e.g. `verify` did not pass).
pub const CHECK_FAILED: u8 = 1;
/// Valid run that did not reach the Ψ target; outputs are still written.
pub const NOT_CONVERGED: u8 = 2;
pub const USAGE: u8 = 64;
pub const DATA: u8 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => USAGE,
            _ => DATA,
        }
    }
}

impl From<DxzError> for CliError {
    fn from(e: DxzError) -> Self {
        match e {
            DxzError::InvalidPartition { .. } | DxzError::DimensionMismatch { .. } | DxzError::InvalidPermutation(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
