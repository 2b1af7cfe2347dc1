//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("blow-up at step {step}: {detail}")]
    BlowUp { step: usize, detail: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("parity undefined for variable `{0}`")]
    ParityUndefined(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
