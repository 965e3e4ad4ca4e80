use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation would leave an empty ground set")]
    EmptyGroundSet,
    #[error("ground set of {n} elements exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph has {edges} edges; at most {cap} are supported")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("matroid is not 3-connected: {0}")]
    NotThreeConnected(String),
    #[error("invalid seed partition: {0}")]
    SeedInvalid(String),
    #[error("not an exact 2-separation: {0}")]
    NotA2Separation(String),
    #[error("basepoint is a loop or coloop: {0}")]
    BasepointDegenerate(String),
    #[error("could not certify a generic realization: {0}")]
    DegenerateRealization(String),
    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
