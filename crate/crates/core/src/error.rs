use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported diagram type `{0}`")]
    UnsupportedType(String),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("`{0}` is not a root")]
    NotARoot(String),
    #[error("roots are not mutually orthogonal positive roots: {0}")]
    NotOrthogonal(String),
    #[error("closure broke orthogonality at {0}")]
    ClosureInconsistent(String),
    #[error("orbit exceeds member cap of {0}")]
    OrbitTooLarge(usize),
    #[error("no orbit of the table matches an admissible set of size {0}")]
    UnknownOrbit(usize),
    #[error("cannot classify diagram: {0}")]
    Classification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rule {rule} does not match at position {position}")]
    PatternMismatch { rule: String, position: usize },
    #[error("adjacency constraint of {0} violated")]
    ConstraintViolation(String),
    #[error("search caps exhausted: {0}")]
    CapsExhausted(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
