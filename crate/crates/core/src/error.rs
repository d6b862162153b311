use thiserror::Error;

/// Everything that can go wrong while building graphs, factorizations and
/// schedules.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mismatched element shapes, out-of-range indices, malformed permutations.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("group enumeration exceeded the cap of {cap} elements")]
    Capacity { cap: usize },

    #[error("subgroup is invalid: {0}")]
    InvalidSubgroup(String),

    #[error("ill-defined edges: generator set does not satisfy DH = HD")]
    IllDefinedEdges,

    #[error(
        "graph is not connected: vertex {vertex} is not reachable in both directions from vertex 0"
    )]
    NotConnected { vertex: usize },

    #[error("graph is not regular: vertex {vertex} has out-degree {out_degree} and in-degree {in_degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        out_degree: usize,
        in_degree: usize,
        expected: usize,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
