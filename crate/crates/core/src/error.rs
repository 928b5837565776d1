use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("tuple is not non-decreasing")]
    NotSorted,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported root system {0}")]
    UnsupportedRootSystem(String),
    #[error("Weyl group order exceeds the cap of {0}")]
    WeylCapExceeded(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("lattice containment violated: {0}")]
    Containment(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("ill-defined construction: {0}")]
    IllDefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
