use thiserror::Error;

/// Errors raised by rackforge operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("carrier membership violated: {0}")]
    Carrier(String),
    #[error("group model inconsistency: {0}")]
    Model(String),
    #[error("sampler produced a point outside the carrier: {0}")]
    Sampler(String),
    #[error("chart evaluation left the carrier: {0}")]
    Chart(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_check(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{what}: expected {expected}, got {got}")))
    }
}
