use std::fmt;

use thiserror::Error;

/// Location of a parse failure inside a design or matrix file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            row: None,
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn cell(line: usize, row: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            row: Some(row),
            column: Some(column),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        if let (Some(r), Some(c)) = (self.row, self.column) {
            write!(f, " (row {}, column {})", r + 1, c + 1)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("structure violation: {0}")]
    Structure(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}
