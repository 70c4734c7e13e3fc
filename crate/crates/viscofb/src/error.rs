//! Error types and their process exit codes.

use std::path::PathBuf;

use thiserror::Error;
use viscofb_core::Error as CoreError;

/// A configuration that cannot be run. Exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed TOML or wrong field types.
    #[error("parse error: {0}")]
    Parse(String),
    /// An identifier outside the known set.
    #[error("{cell}unknown {field} `{value}` (expected one of: {expected})")]
    Unknown {
        /// `cell <id>: ` prefix or empty.
        cell: String,
        /// Field name.
        field: &'static str,
        /// Offending value.
        value: String,
        /// Accepted values.
        expected: &'static str,
    },
    /// A named feasibility condition fails.
    #[error("cell {cell}: condition `{condition}` violated: {detail}")]
    Condition {
        /// Cell id.
        cell: String,
        /// Condition text.
        condition: String,
        /// Values behind the verdict.
        detail: String,
    },
    /// Any other invalid field.
    #[error("cell {cell}: invalid {field}: {detail}")]
    Invalid {
        /// Cell id.
        cell: String,
        /// Field name.
        field: String,
        /// Explanation.
        detail: String,
    },
}

impl ConfigError {
    pub(crate) fn invalid(cell: &str, field: &str, detail: String) -> Self {
        ConfigError::Invalid {
            cell: cell.to_owned(),
            field: field.to_owned(),
            detail,
        }
    }

    pub(crate) fn unknown(field: &'static str, value: &str, expected: &'static str) -> Self {
        ConfigError::Unknown {
            cell: String::new(),
            field,
            value: value.to_owned(),
            expected,
        }
    }

    pub(crate) fn in_cell(self, id: &str) -> Self {
        match self {
            ConfigError::Unknown { field, value, expected, .. } => ConfigError::Unknown {
                cell: format!("cell {id}: "),
                field,
                value,
                expected,
            },
            other => other,
        }
    }

    pub(crate) fn from_core(cell: &str, err: CoreError) -> Self {
        match err {
            CoreError::Infeasible { condition, detail } => ConfigError::Condition {
                cell: cell.to_owned(),
                condition: condition.to_owned(),
                detail,
            },
            other => ConfigError::invalid(cell, "instance", other.to_string()),
        }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

/// Failure while executing a plan.
#[derive(Debug, Error)]
pub enum RunError {
    /// Reading the config or writing an artifact failed. Exit code 3.
    #[error("I/O error on {path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// The configuration is invalid. Exit code 2.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The solver rejected a validated cell. Exit code 1.
    #[error("cell {cell}: {source}")]
    Solver {
        /// Cell id.
        cell: String,
        /// Underlying error.
        source: CoreError,
    },
}

impl RunError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Io { .. } => 3,
            RunError::Config(c) => c.exit_code(),
            RunError::Solver { .. } => 1,
        }
    }
}
