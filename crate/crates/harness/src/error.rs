use relayopt_core::ModelError;
use thiserror::Error;

use crate::verify::VerifyReport;

/// Problems found while reading a scenario file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key `{key}` given more than once")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: cannot parse `{value}` for `{key}`")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },

    #[error("missing required key `{0}`")]
    Missing(&'static str),

    #[error("invalid configuration: {0}")]
    Invariant(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("verification failed:\n{0}")]
    Verify(VerifyReport),
}

impl HarnessError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Config(_) | HarnessError::Io { .. } => 1,
            HarnessError::Verify(_) => 2,
            HarnessError::Model(ModelError::InvalidScenario(_) | ModelError::InvalidConfig(_)) => 1,
            HarnessError::Model(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
