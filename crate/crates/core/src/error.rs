use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("point {point} out of range for a space on {n_points} points")]
    PointOutOfRange { point: usize, n_points: usize },
    #[error("{what}: {value} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("relation is not a strict partial order: {0}")]
    NotStrictOrder(String),
    #[error("family of sets is not a topology: {0}")]
    NotTopology(String),
    #[error("space is not scattered")]
    NotScattered,
    #[error("space is not T_d")]
    NotTd,
    #[error("point {0} is not isolated in the base space")]
    NotIsolated(usize),
    #[error("node {0} is not a leaf")]
    NotLeaf(usize),
    #[error("operator violates {axiom} at subset {witness:?}")]
    MagariViolation { axiom: &'static str, witness: Vec<usize> },
    #[error("spaces do not share a carrier: {0} vs {1} points")]
    CarrierMismatch(usize, usize),
    #[error("modality index {index} out of range (only {available} topologies)")]
    IndexOutOfRange { index: u32, available: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("formula uses modality index {0}; only index 0 is allowed here")]
    NonZeroIndex(u32),
    #[error("ordinal {0} is outside the domain {1}")]
    OutsideDomain(String, String),
    #[error("cannot subtract: {0} is larger than {1}")]
    SubtractionUnderflow(String, String),
    #[error("formula is not a boolean combination of words: {0}")]
    NotWordCombination(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
