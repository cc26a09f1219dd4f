//! Crate-wide error type.

use thiserror::Error;

use crate::qmath::QmathError;

/// Errors raised by the simulation, optimisation and test layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] QmathError),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("gate acts on repeated qubit {0}")]
    RepeatedQubit(usize),
    #[error("gate matrix is not unitary: {0}")]
    NotUnitary(String),
    #[error("operator is not a projector: {0}")]
    NotProjector(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("register mismatch: {0}")]
    RegisterMismatch(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("solver did not converge: gap {gap:.3e} after {iterations} iterations")]
    NotConverged { gap: f64, iterations: usize },
    #[error("channel is not free for this test: {0}")]
    NotFree(String),
}

/// Result alias for the crate.
pub type Result<T> = std::result::Result<T, Error>;
