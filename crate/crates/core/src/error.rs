use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("{what} on {n} vertices exceeds the limit of {limit}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("series error: {0}")]
    Series(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
