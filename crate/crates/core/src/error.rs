use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The scalar is not a root of unity, so no positive power equals 1.
    #[error("order is undefined for the irrational rotation {0}")]
    OrderUndefined(String),

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("invalid spectrum spec: {0}")]
    InvalidSpectrum(String),

    #[error("invalid permutation spec: {0}")]
    InvalidPermutation(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("the zero vector has no period")]
    ZeroVector,

    /// Some support index lies on an irrational eigenvalue or an infinite orbit.
    #[error("vector is not periodic: {0}")]
    NotPeriodic(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("selector is not closed-form checkable for this permutation: {0}")]
    UnsupportedSelector(String),

    #[error("grouped vector is not certified square-summable")]
    NotSquareSummable,

    #[error("family admits no closed-form snap: {0}")]
    UnsupportedFamily(String),

    #[error("no orbit-closed truncation exists: {0}")]
    OrbitClosureUnavailable(String),

    #[error("matrix is not normal (defect {0:e})")]
    NotNormal(f64),

    #[error("operator kind mismatch: {0}")]
    WrongOperatorKind(String),

    #[error("parse error: {0}")]
    Parse(String),
}
