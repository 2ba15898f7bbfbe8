use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown document `{0}`")]
    DanglingDocument(String),

    #[error("pagerank did not converge after {iters} iterations (residual {residual:e})")]
    NonConvergence { iters: usize, residual: f64 },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("non-finite gradient in `{0}`; step rejected")]
    NonFiniteGradient(String),

    #[error("checkpoint {path}: {msg} (at byte offset {offset})")]
    Checkpoint {
        path: PathBuf,
        offset: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("day {day}: {source}")]
    Day {
        day: i64,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Runtime,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    pub fn in_day(self, day: i64) -> Self {
        match self {
            e @ Error::Day { .. } => e,
            e => Error::Day {
                day,
                source: Box::new(e),
            },
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config { .. } => ErrorKind::Config,
            Error::Parse { .. }
            | Error::UnknownNode(_)
            | Error::DanglingDocument(_)
            | Error::Io { .. }
            | Error::Checkpoint { .. } => ErrorKind::Data,
            Error::Day { source, .. } => source.kind(),
            _ => ErrorKind::Runtime,
        }
    }
}
