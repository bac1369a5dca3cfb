use thiserror::Error;

/// Failures that stop a command before a report is produced (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

/// Configuration and shape problems in the library are input errors.
impl From<rackforge::Error> for CliError {
    fn from(e: rackforge::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
