//! CLI error classes and their exit codes.

use std::fmt;

/// Exit codes: 2 input/parse, 3 budget or non-certified result, 4 internal
/// contract violation.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Parse { line: usize, msg: String },
    Budget(String),
    Contract(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Parse { .. } => 2,
            CliError::Budget(_) => 3,
            CliError::Contract(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            CliError::Budget(msg) => write!(f, "budget error: {msg}"),
            CliError::Contract(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<submod_core::Error> for CliError {
    fn from(e: submod_core::Error) -> Self {
        match e {
            submod_core::Error::Input(msg) => CliError::Input(msg),
            submod_core::Error::Budget(msg) => CliError::Budget(msg),
            submod_core::Error::Contract(msg) => CliError::Contract(msg),
        }
    }
}
