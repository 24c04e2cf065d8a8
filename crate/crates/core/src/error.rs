use thiserror::Error;

use crate::kgraph::KEdge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("edge {0} is absent")]
    AbsentEdge(KEdge),

    #[error("graph has no monochromatic tight component")]
    NoComponent,

    #[error("no bridge: step {step} has no admissible vertex")]
    NoBridge { step: usize },

    #[error("walk junction intersects in {found} vertices, need at least {needed}")]
    IntersectionTooSmall { found: usize, needed: usize },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("no crossing witness exists on this walk")]
    NoWitness,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("sparsification did not reach the density target after {0} attempts")]
    DensificationFailed(usize),

    #[error("random walk could not be closed")]
    CannotClose,

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl Error {
    /// Usage-level problems (bad files, malformed arguments) as opposed to
    /// failures of an algorithm on a well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}
