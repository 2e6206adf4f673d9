//! Finite-dimensional Hilbert-space kernels: labeled multipartite states,
//! Stinespring channels, Haar sampling and distance measures.
//!
//! All state data is dense. The total dimension of any state is capped at
//! [`MAX_DIM`] (`2^14`).

mod catalog;
mod channel;
mod distance;
mod haar;
mod json;
pub mod linalg;
mod state;

use thiserror::Error;

pub use catalog::{builtin_state, random_tripartite, BUILTIN_SUITE};
pub use channel::QuantumChannel;
pub use distance::{fidelity, fidelity_matrices, trace_distance, trace_distance_matrices};
pub use haar::{complex_gaussian, haar_isometry_matrix, haar_unitary, haar_unitary_with};
pub use json::StateJson;
pub use linalg::{CMat, CVec};
pub use state::{label, MultipartiteState, StateData, SystemLabel};

/// Largest supported total dimension of a dense state.
pub const MAX_DIM: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("invalid system label {name:?}: {reason}")]
    InvalidLabel { name: String, reason: String },
    #[error("system name {0:?} appears more than once")]
    NameCollision(String),
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("matrix is not an isometry: max |V^dagger V - I| = {0:e}")]
    NotIsometry(f64),
    #[error("reference dimension {given} is smaller than the state rank {rank}")]
    ReferenceTooSmall { given: usize, rank: usize },
    #[error("isometry output dimension {d_out} is smaller than input dimension {d_in}")]
    OutputTooSmall { d_in: usize, d_out: usize },
    #[error("total dimension {0} exceeds the supported maximum of 16384")]
    TooLarge(usize),
    #[error("malformed state JSON: {0}")]
    Json(String),
}
