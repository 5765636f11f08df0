use std::fmt;
use std::path::Path;

use guesswork_core::GuessworkError;

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_IO: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<GuessworkError> for CliError {
    fn from(e: GuessworkError) -> Self {
        CliError::Validation(e.to_string())
    }
}
