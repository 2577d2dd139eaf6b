use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("not representable in the computable models: {0}")]
    NotRepresentable(String),
    #[error("operator is not a Riesz multimorphism: {0}")]
    NotMultimorphism(String),
    #[error("sublattice closure did not stabilize within {rounds} rounds")]
    ClosureBudgetExceeded { rounds: usize },
    #[error("iterated limit did not stabilize below index cap {cap}: {detail}")]
    StabilizationFailure { cap: usize, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(what: impl Into<String>) -> Error {
    Error::DomainMismatch(what.into())
}
