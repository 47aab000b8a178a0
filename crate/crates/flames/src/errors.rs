use thiserror::Error;

/// Errors shared across the crate. Variant names follow the per-operation
/// error vocabulary of the public API.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("loop edge at {0}")]
    LoopEdge(String),
    #[error("root has in-edge from {0}")]
    RootHasInEdge(String),
    #[error("unknown endpoint {0}")]
    UnknownEndpoint(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("edge {0} -> {1} is not an in-edge of {2}")]
    EdgeNotIngoing(String, String, String),
    #[error("root vertex may not be a member of the set")]
    RootInSet,
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("E+/E- views are undefined on systems containing trivial paths")]
    TrivialPathInView,
    #[error("path system violates mode {0}: {1}")]
    ModeViolation(String, String),
    #[error("not an Erdos-Menger separation: {0}")]
    NotAnEMSeparation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bubble chain condition violated at index {0}")]
    ChainConditionViolated(usize),
    #[error("path systems are not disjoint: {0}")]
    NotDisjoint(String),
    #[error("not a system of X->Y paths: {0}")]
    NotXYPaths(String),
    #[error("edge set is not realizable as an exact last-edge set: {0}")]
    NotInG(String),
    #[error("not a spanning subdigraph: {0}")]
    NotSpanning(String),
    #[error("not a vertex-flame: {0}")]
    NotAFlame(String),
    #[error("not a large subdigraph: {0}")]
    NotLarge(String),
    #[error("protected edge ledger is not realizable: {0}")]
    LedgerNotInG(String),
    #[error("instance too large for exhaustive search: {0} exceeds limit {1}")]
    TooLarge(usize, usize),
    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
