//! Error-to-exit-code mapping. The contract is stable: 0 success, 2 usage or
//! validation, 3 I/O, 4 internal numeric failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, malformed config, or validation failure (exit 2).
    Usage(String),
    /// File system failure (exit 3).
    Io(String),
    /// Numeric routine failed to converge (exit 4).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) | CliError::Numeric(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<banditbench::ConfigError> for CliError {
    fn from(err: banditbench::ConfigError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<banditbench::StatsError> for CliError {
    fn from(err: banditbench::StatsError) -> Self {
        match err {
            banditbench::StatsError::NonConvergence { .. } => CliError::Numeric(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}
