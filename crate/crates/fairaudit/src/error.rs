//! Crate-wide error type.

use thiserror::Error;

use crate::domain::Group;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid document: {0}")]
    Document(String),

    #[error("duplicate instance id {0:?}")]
    DuplicateId(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("weights sum to {got}, expected 1")]
    WeightSum { got: String },

    #[error("negative weight {weight} for instance {id:?}")]
    NegativeWeight { id: String, weight: String },

    #[error("task {task:?} is missing a label for instance {id:?}")]
    MissingLabel { task: String, id: String },

    #[error("task {task:?} labels unknown instance {id:?}")]
    UnknownLabelId { task: String, id: String },

    #[error("label for instance {id:?} in task {task:?} is {value}, expected 0 or 1")]
    BadLabel { task: String, id: String, value: u64 },

    #[error("feature {feature:?} is missing a value for instance {id:?}")]
    MissingFeatureValue { feature: String, id: String },

    #[error("feature {feature:?} maps unknown instance {id:?}")]
    UnknownFeatureId { feature: String, id: String },

    #[error("unknown task {0:?}")]
    UnknownTask(String),

    #[error("unknown feature {0:?}")]
    UnknownFeature(String),

    #[error("unknown partition {0:?}")]
    UnknownPartition(String),

    #[error("partition {name:?} is not a partition of the instance set: {reason}")]
    BadPartition { name: String, reason: String },

    #[error("group {0:?} has zero probability mass")]
    EmptyGroup(Group),

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(String),

    #[error("cell count {cells} exceeds the enumeration bound {bound}")]
    CellBoundExceeded { cells: usize, bound: usize },

    #[error("instance count {instances} exceeds the search bound {bound}")]
    SizeBoundExceeded { instances: usize, bound: usize },

    #[error("minimizer set exceeds the cap of {cap}")]
    MinimizerCapExceeded { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("infeasible generator parameters: {0}")]
    GeneratorParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
