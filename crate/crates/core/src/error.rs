use thiserror::Error;

use crate::sources::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set of size {size} exceeds the limit of {limit} for this operation")]
    GroundTooLarge { size: usize, limit: usize },

    #[error("operands are defined over different ground sets ({left} vs {right} elements)")]
    GroundMismatch { left: usize, right: usize },

    #[error("a partition block must be non-empty")]
    EmptyBlock,

    #[error("blocks do not form a partition of the ground set: {0}")]
    NotAPartition(String),

    #[error("unknown variable: {0}")]
    UnknownVariable(String),

    #[error("duplicate identifier: {0}")]
    DuplicateName(String),

    #[error("the ground set must contain at least one element")]
    EmptyGround,

    #[error("operation requires a non-empty set")]
    EmptySet,

    #[error("family members must be pairwise disjoint and non-empty")]
    OverlappingFamily,

    #[error("set must contain at least two elements, got {0}")]
    SubsetTooSmall(usize),

    #[error("no unique finest optimal partition within tolerance")]
    NoUniqueFinest,

    #[error("set {set} has MMI within tolerance of the threshold; equality is ambiguous in floating point")]
    FloatEqualityAmbiguous { set: String },

    #[error("size {k} is outside 0..={max}")]
    BadSize { k: usize, max: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("model failed validation with {} violation(s)", .0.len())]
    InvalidModel(Vec<Violation>),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
