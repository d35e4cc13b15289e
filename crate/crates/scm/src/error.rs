use std::path::PathBuf;

use thiserror::Error;

/// Syntax error in an input file.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsatisfiable constraints: {0}")]
    Constraint(String),

    #[error(transparent)]
    Numeric(#[from] scm_core::Error),
}

impl CliError {
    /// Process exit code: 2 usage/config, 3 parse or IO, 4 constraints,
    /// 5 numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } => 3,
            CliError::Constraint(_) => 4,
            CliError::Numeric(scm_core::Error::EmptyBasis)
            | CliError::Numeric(scm_core::Error::Configuration(_))
            | CliError::Numeric(scm_core::Error::UnknownIrrep { .. })
            | CliError::Numeric(scm_core::Error::MismatchedGroups(..)) => 4,
            CliError::Numeric(_) => 5,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
