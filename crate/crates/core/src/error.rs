use std::io;

use thiserror::Error;

/// Coarse error category, used by front-ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected {expected} columns, found {found}")]
    MalformedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{}symbol {symbol:?} is not in the alphabet", line_prefix(*.line))]
    InvalidSymbol { symbol: char, line: Option<usize> },

    #[error("line {line}: empty transcription")]
    EmptyTranscription { line: usize },

    #[error("meaning {meaning:?}: gold cognate classes must be given for all forms or for none")]
    MixedGold { meaning: String },

    #[error("unknown meaning {0:?}")]
    UnknownMeaning(String),

    #[error("{}{message}", line_prefix(*.line))]
    PmiFormat {
        line: Option<usize>,
        message: String,
    },

    #[error("pmi matrix is missing the pair ({0}, {1})")]
    MissingPair(char, char),

    #[error("pmi matrix gives ({a}, {b}) = {first} and ({b}, {a}) = {second}")]
    AsymmetricPair {
        a: char,
        b: char,
        first: f64,
        second: f64,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("item mismatch: {0}")]
    ItemMismatch(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MalformedRow { .. }
            | Error::Syntax { .. }
            | Error::PmiFormat { .. }
            | Error::MissingPair(..)
            | Error::AsymmetricPair { .. } => ErrorClass::Parse,
            Error::Io(_) => ErrorClass::Io,
            _ => ErrorClass::Validation,
        }
    }

    /// Attaches a line number to errors that can carry one but don't yet.
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::InvalidSymbol { symbol, line: None } => Error::InvalidSymbol {
                symbol,
                line: Some(line),
            },
            Error::PmiFormat {
                line: None,
                message,
            } => Error::PmiFormat {
                line: Some(line),
                message,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
