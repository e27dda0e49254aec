use thiserror::Error;

/// Errors produced by graph construction, privacy accounting and the protocols.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DsgError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("infeasible privacy parameters: {0}")]
    InfeasiblePrivacy(String),
    #[error("zero-noise mode was not enabled on this runtime")]
    ZeroNoiseNotEnabled,
    #[error("boundary violation: node {node} asked for the adjacency of node {other}")]
    BoundaryViolation { node: usize, other: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("hedge horizon of {0} rounds is exhausted")]
    HorizonExhausted(usize),
    #[error("{what} supports at most {limit} vertices, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("transcript replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, DsgError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DsgError {
    DsgError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl From<std::io::Error> for DsgError {
    fn from(e: std::io::Error) -> Self {
        DsgError::Io(e.to_string())
    }
}
