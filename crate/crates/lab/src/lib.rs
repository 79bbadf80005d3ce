//! Experiment harness around the incidence engine: seeded instance
//! generators, the end-to-end dualization certificate, named verification
//! campaigns, CSV reports, and a throughput benchmark. The `incidence-lab`
//! binary exposes all of it as subcommands.

pub mod bench;
pub mod campaigns;
pub mod certificate;
pub mod instance;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] incidence_core::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in {path} line {line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        LabError::Invalid(msg.into())
    }
}
