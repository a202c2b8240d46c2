use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration would exceed a configured bound.
    #[error("capacity exceeded: {what} is {count}, limit is {limit}")]
    Capacity {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    /// A closed form was requested outside the parameter range it covers.
    #[error("{0}")]
    Regime(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, count: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Capacity {
            what,
            count: count.into(),
            limit: limit.into(),
        }
    }
}
