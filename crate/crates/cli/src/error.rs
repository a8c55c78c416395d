use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use cognate_core::{Error, ErrorClass};

/// A core error with the file it came from, or a bad flag combination.
#[derive(Debug)]
pub enum CliError {
    Core {
        path: Option<PathBuf>,
        source: Error,
    },
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source, .. } => match source.class() {
                ErrorClass::Parse => 2,
                ErrorClass::Validation => 3,
                ErrorClass::Io => 4,
            },
            CliError::Config(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core {
                path: Some(p),
                source,
            } => write!(f, "{}: {source}", p.display()),
            CliError::Core { path: None, source } => write!(f, "{source}"),
            CliError::Config(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError::Core { path: None, source }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

pub trait WithPath<T> {
    fn in_file(self, path: &Path) -> Result<T, CliError>;
}

impl<T> WithPath<T> for Result<T, Error> {
    fn in_file(self, path: &Path) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core {
            path: Some(path.to_path_buf()),
            source,
        })
    }
}

impl<T> WithPath<T> for io::Result<T> {
    fn in_file(self, path: &Path) -> Result<T, CliError> {
        self.map_err(Error::Io).in_file(path)
    }
}
