//! Library side of the `dhlab` command: document parsing, command dispatch,
//! report emission and plot data.

pub mod commands;
pub mod document;
pub mod plot;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// 2 for anything wrong with the input, 3 for a failed self-check.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub use commands::{run, Command, Options};
