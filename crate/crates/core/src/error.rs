use std::io;

/// Errors raised while loading dictionaries, rule tables and other resources.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A resource line could not be parsed. `line` is 1-based.
    #[error("{resource} line {line}: {message}")]
    Parse {
        resource: &'static str,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(resource: &'static str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            resource,
            line,
            message: message.into(),
        }
    }

    /// Line number of a parse error, if this is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Parse { line, .. } => Some(*line),
            Error::Io(_) => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
