use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has degree 0")]
    ZeroDegree(String),
    #[error("polynomial mixes several degrees")]
    MixedDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown generator `{0}`")]
    UnknownName(String),
    #[error("differential of `{0}` assigned twice")]
    DuplicateDifferential(String),
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
    #[error("stage filtration does not terminate; cycle through `{0}`")]
    StageCycle(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("element is not a cocycle")]
    NotClosed,
    #[error("derivation does not commute with the differential on `{0}`")]
    DoesNotDescend(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("generator `{0}` is not of odd degree")]
    NotOdd(String),
    #[error("generator `{0}` is not closed")]
    NotClosed(String),
    #[error("differential of `{0}` does not lie in the base subalgebra")]
    NotInBase(String),
    #[error("cohomology of `{0}` is not certified finite; totals are unavailable")]
    NotFinite(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
}
