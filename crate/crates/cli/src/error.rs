use std::fmt;

/// Process exit status of a failed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Other = 1,
    Config = 2,
    Parse = 3,
    InsufficientData = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn new(kind: ExitKind, error: impl Into<anyhow::Error>) -> Self {
        CliError {
            kind,
            error: error.into(),
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::new(ExitKind::Config, anyhow::anyhow!("{msg}"))
    }

    pub fn parse(msg: impl fmt::Display) -> Self {
        CliError::new(ExitKind::Parse, anyhow::anyhow!("{msg}"))
    }

    pub fn insufficient(msg: impl fmt::Display) -> Self {
        CliError::new(ExitKind::InsufficientData, anyhow::anyhow!("{msg}"))
    }
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::new(ExitKind::Other, e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
