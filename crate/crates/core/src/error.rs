use thiserror::Error;

/// Errors raised by graph construction and the query operations.
///
/// Domain outcomes that carry meaning (a partition not existing, a theorem
/// hypothesis failing, a brute-force search coming up empty) are *not*
/// errors; they are modeled as enum results in their own modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("loop ({0},{0}) is not allowed here")]
    LoopNotAllowed(String),
    #[error("parallel arc ({0},{1})")]
    ParallelArc(String, String),
    #[error("arc ({0},{1}) is not an arc of the digraph")]
    NoSuchArc(String, String),
    #[error("operation is undefined on the empty digraph")]
    EmptyDigraph,
    #[error("sequence {0:?} is not a walk: {1}")]
    NotAWalk(Vec<String>, String),
    #[error("digraph is not symmetric: arc ({0},{1}) has no reverse")]
    NotSymmetric(String, String),
    #[error("digraph is not transitive: ({0},{1}),({1},{2}) present but ({0},{2}) missing")]
    NotTransitive(String, String, String),
    #[error("{n} vertices exceed the brute-force bound {bound}; use oracle-only verification")]
    SizeBound { n: usize, bound: usize },
    #[error("candidate classes do not partition the arc set: {0}")]
    NotAPartition(String),
    #[error("empty color set")]
    EmptyColorSet,
    #[error("walk endpoints must be distinct")]
    SameEndpoints,
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
