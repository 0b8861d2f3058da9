use std::fmt::Display;

use pdmosc_core::{ClassicalError, EigenError, QuantumError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("classical solver failed: {0}")]
    Classical(ClassicalError),
    #[error("{0}")]
    Unbound(QuantumError),
    #[error("quantum computation failed: {0}")]
    Quantum(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn invalid(path: &str, err: impl Display) -> Self {
        CliError::Config {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub fn from_quantum(err: QuantumError) -> Self {
        match err {
            QuantumError::Unbound { .. } => CliError::Unbound(err),
            QuantumError::Model(_) | QuantumError::InvalidAuxiliaryMass(_) => {
                CliError::invalid("model", err)
            }
            other => CliError::Quantum(other.to_string()),
        }
    }

    pub fn from_eigen(err: EigenError) -> Self {
        match err {
            EigenError::Quantum(q) => Self::from_quantum(q),
            EigenError::InvalidGrid { .. } | EigenError::TooManyLevels { .. } => {
                CliError::invalid("eigensolve", err)
            }
            other => CliError::Quantum(other.to_string()),
        }
    }

    /// Classical errors caused by the input are validation failures.
    pub fn from_classical(path: &str, err: ClassicalError) -> Self {
        match err {
            ClassicalError::Model(_)
            | ClassicalError::InvalidTolerance(_)
            | ClassicalError::InvalidSpan(_)
            | ClassicalError::AmplitudeDomain { .. } => CliError::invalid(path, err),
            other => CliError::Classical(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Classical(_) => 3,
            CliError::Unbound(_) => 4,
            CliError::Quantum(_) | CliError::Io { .. } | CliError::Output(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
