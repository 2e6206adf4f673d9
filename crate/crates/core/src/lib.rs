//! Simulation and resource accounting for quantum state merging with α-bit
//! channels.
//!
//! The numerical modules are generic over [`scalar::Real`] (`f32`/`f64`);
//! exact resource coefficients and rate formulas use `BigRational`. The type
//! aliases below fix the common `f64` instantiation.

pub mod alpha_channel;
pub mod calculus;
pub mod entropy;
pub mod error;
pub mod hilbert;
pub mod protocols;
pub mod rates;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};

pub type State = hilbert::MultipartiteState<f64>;
pub type Channel = hilbert::QuantumChannel<f64>;
pub type Matrix = hilbert::CMat<f64>;
pub type Vector = hilbert::CVec<f64>;
