use thiserror::Error;

/// Errors raised while building, parsing or transforming fibers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("duplicate component `{0}`")]
    DuplicateComponent(String),
    #[error("invalid value for component `{component}`: {message}")]
    InvalidComponent { component: String, message: String },
    #[error("node {a}-{b} has zero count")]
    ZeroCount { a: String, b: String },
    #[error("not a numerical fiber: {0}")]
    NotNumerical(String),
    #[error("Zariski identity fails at `{component}`: {lhs} != 0")]
    Zariski { component: String, lhs: i64 },
    #[error("graph is disconnected (component `{0}` unreachable)")]
    Disconnected(String),
    #[error("declared genus {declared} differs from computed genus {computed}")]
    GenusMismatch { declared: i64, computed: i64 },
    #[error("not a fiber of a relatively minimal family: {0}")]
    NotAFiber(String),
    #[error("invalid resolution record: {0}")]
    Resolution(String),
    #[error("contraction leaves normal-crossing category at `{0}`")]
    LeavesNormalCrossing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = FiberError> = std::result::Result<T, E>;
