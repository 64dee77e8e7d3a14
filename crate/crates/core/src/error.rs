use thiserror::Error;

/// Errors raised by the library.
///
/// Validators never return these for a failed property; they carry the
/// failure in a report instead. Errors are reserved for malformed input,
/// broken preconditions and oracle size caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidTree(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
