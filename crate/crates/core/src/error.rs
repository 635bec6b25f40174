use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {id} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { id: u64, n: usize },

    #[error("node {0} has no references and no citations")]
    IsolatedNode(NodeId),

    #[error("graph is too large: {0} nodes")]
    TooManyNodes(usize),

    #[error("seed set is empty")]
    EmptySeedSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
