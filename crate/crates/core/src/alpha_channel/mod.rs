//! α-dit channels: the `N_α` random-isometry family, subspace decoding,
//! sampled forgetfulness of the complementary channel, and the empirical
//! check of the decoding/decoupling duality.

mod decode;
mod duality;
mod forget;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{HilbertError, MultipartiteState, QuantumChannel, SystemLabel};
use crate::scalar::Real;

pub use decode::{decode_subspace, SubspaceDecoder};
pub use duality::{verify_duality, DualityChecks, DualityPoint, DualityReport, SubspaceKind, ANTI_DECOUPLING, SUCCESS_FIDELITY};
pub use forget::{forgetfulness_deficit, ForgetfulnessEstimate, DEFAULT_SAMPLES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(
        "environment dimension {d_e} must be smaller than output dimension {d_b} \
         (the environment must hold less than half of the output)"
    )]
    EnvironmentTooLarge { d_b: usize, d_e: usize },
    #[error("input dimension must be at least 2 to define α, got {0}")]
    TrivialInput(usize),
    #[error("basis is not orthonormal: max |W^dagger W - I| = {0:e}")]
    NotOrthonormal(f64),
    #[error("subspace dimension {k} exceeds input dimension {d}")]
    SubspaceTooLarge { k: usize, d: usize },
}

type CResult<T> = Result<T, ChannelError>;

/// `(d, α, ε)`: every subspace of dimension at most `k = ⌊d^α⌋` should be
/// decodable with error `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaDitSpec {
    pub d: usize,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl AlphaDitSpec {
    /// Largest guaranteed-decodable subspace dimension, at least 1.
    pub fn k(&self) -> usize {
        ((self.d as f64).powf(self.alpha) + 1e-9).floor().max(1.0) as usize
    }

    /// `log2 d`, the α-dit size in qubits.
    pub fn log_dim(&self) -> f64 {
        (self.d as f64).log2()
    }

    /// `α log2 d`, the number of qubits' worth of decodable subspace.
    pub fn capacity_bits(&self) -> f64 {
        self.alpha * self.log_dim()
    }
}

/// Haar isometry `A -> B E` with `α = (log dB - log dE) / log dA`.
pub fn make_n_alpha<T: Real>(
    d_a: usize,
    d_b: usize,
    d_e: usize,
    seed: u64,
) -> CResult<(QuantumChannel<T>, AlphaDitSpec)> {
    if d_e >= d_b {
        return Err(ChannelError::EnvironmentTooLarge { d_b, d_e });
    }
    if d_a < 2 {
        return Err(ChannelError::TrivialInput(d_a));
    }
    let ch = QuantumChannel::haar(d_a, SystemLabel::new("B", d_b)?, SystemLabel::new("E", d_e)?, seed)?;
    let alpha = ((d_b as f64).log2() - (d_e as f64).log2()) / (d_a as f64).log2();
    Ok((ch, AlphaDitSpec { d: d_a, alpha, epsilon: None }))
}

/// `||rho_RE - rho_R ⊗ rho_E||_1` with the state's own marginals.
pub fn decoupling_check<T: Real>(
    state: &MultipartiteState<T>,
    r: &[&str],
    e: &[&str],
) -> CResult<T> {
    let keep: Vec<&str> = r.iter().chain(e).copied().collect();
    let rho_re = state.partial_trace(&keep)?.reorder(&keep)?;
    let rho_r = rho_re.partial_trace(r)?.reorder(r)?;
    let rho_e = rho_re.partial_trace(e)?.reorder(e)?;
    let product = rho_r.tensor_with(&rho_e)?;
    Ok(crate::hilbert::trace_distance(&rho_re, &product)?)
}
