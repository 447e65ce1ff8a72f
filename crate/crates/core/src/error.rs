use thiserror::Error;

use crate::math::MathError;
use crate::target::TargetError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error("incompatible ramification data: {0}")]
    Incompatible(String),
    #[error("{source} (graph {graph})")]
    Polynomiality {
        graph: String,
        #[source]
        source: MathError,
    },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("unstable insertion pattern: {0}")]
    UnstableInsertion(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
