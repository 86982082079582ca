use thiserror::Error;

use crate::report::Witness;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("carrier {carrier} lists atom {atom} twice")]
    DuplicateAtom { carrier: String, atom: String },
    #[error("functor mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
}

/// A definition was refused because one of its laws (or a precondition)
/// failed; carries the failing law and its witness.
#[derive(Debug, Error, Clone)]
#[error("{what} refused: law {law} failed ({})", .witness.observation)]
pub struct ConstructionError {
    pub what: String,
    pub law: String,
    pub witness: Witness,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite id: {0}")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed witness file: {0}")]
    MalformedWitness(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
