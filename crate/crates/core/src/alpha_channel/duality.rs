use serde::{Deserialize, Serialize};

use super::decode::decode_subspace;
use super::forget::{chained, distinguishability, ForgetfulnessEstimate, DEFAULT_SAMPLES};
use super::{CResult, ChannelError};
use crate::hilbert::linalg::CMat;
use crate::hilbert::{haar_isometry_matrix, QuantumChannel};
use crate::rng;
use crate::scalar::{cr, Real};

/// A decode at or above this entanglement fidelity counts as a success.
pub const SUCCESS_FIDELITY: f64 = 0.95;
/// A subspace whose reference stays this correlated with `E` is flagged.
pub const ANTI_DECOUPLING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    /// Span of the first `k` computational basis vectors.
    Computational,
    /// Haar-random `k`-frame.
    Haar,
}

/// One sampled subspace: its decode fidelity and decoupling deficit
/// `||ρ_RE - π_R ⊗ ρ_E||_1` under the maximally entangled input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DualityPoint {
    pub trial: usize,
    pub k: usize,
    pub subspace_kind: SubspaceKind,
    pub fidelity: f64,
    pub deficit: f64,
    pub seed: u64,
}

/// Pass/fail of each implication over all sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DualityChecks {
    /// Small deficit forces good decoding: `f >= (1 - d/2)^2`.
    pub decoding_bound: bool,
    /// Good decoding forces a small deficit: `d <= 4 sqrt(1 - f)`.
    pub decoupling_bound: bool,
    /// Every failed decode comes with forgetfulness at least `1 - sqrt(f)`.
    pub forgetfulness_floor: bool,
    /// No point is both a successful decode and anti-decoupled.
    pub no_contradiction: bool,
}

impl DualityChecks {
    pub fn all(&self) -> bool {
        self.decoding_bound && self.decoupling_bound && self.forgetfulness_floor && self.no_contradiction
    }
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub k: usize,
    pub points: Vec<DualityPoint>,
    pub forgetfulness: ForgetfulnessEstimate<f64>,
    /// `(deficit, worst infidelity at or below that deficit)`, sorted by deficit.
    pub envelope: Vec<(f64, f64)>,
    pub checks: DualityChecks,
}

impl DualityReport {
    pub fn min_fidelity(&self) -> f64 {
        self.points.iter().map(|p| p.fidelity).fold(f64::INFINITY, f64::min)
    }

    pub fn max_deficit(&self) -> f64 {
        self.points.iter().map(|p| p.deficit).fold(0.0, f64::max)
    }

    pub fn all_decoded(&self) -> bool {
        self.points.iter().all(|p| p.fidelity >= SUCCESS_FIDELITY)
    }

    /// Worst decode infidelity observed at deficit `<= d`.
    pub fn envelope_at(&self, d: f64) -> f64 {
        self.envelope.iter().take_while(|(x, _)| *x <= d).last().map_or(0.0, |(_, y)| *y)
    }
}

fn running_max_envelope(points: &[DualityPoint]) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.deficit, 1.0 - p.fidelity)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut worst = f64::NEG_INFINITY;
    pairs
        .into_iter()
        .map(|(d, inf)| {
            worst = worst.max(inf);
            (d, worst)
        })
        .collect()
}

/// Samples `trials` subspaces of dimension `k` (the computational one first,
/// then Haar frames from `child_seed(seed, trial)`), decodes each, and checks
/// the two directions of the decoding/forgetfulness duality against a
/// forgetfulness estimate that includes every sampled subspace as a candidate.
pub fn verify_duality<T: Real>(ch: &QuantumChannel<T>, k: usize, trials: usize, seed: u64) -> CResult<DualityReport> {
    let d = ch.input_dim();
    if k == 0 || k > d {
        return Err(ChannelError::SubspaceTooLarge { k, d });
    }
    let inv_sqrt_k = cr(T::one() / T::from_usize(k).unwrap().sqrt());
    let mut points = Vec::with_capacity(trials);
    let mut inputs = Vec::with_capacity(trials);
    for trial in 0..trials {
        let trial_seed = rng::child_seed(seed, trial as u64);
        let (kind, basis) = if trial == 0 {
            (SubspaceKind::Computational, CMat::<T>::identity(d, k))
        } else {
            let mut r = rng::stream(trial_seed, 0);
            (SubspaceKind::Haar, haar_isometry_matrix::<T>(k, d, &mut r))
        };
        let dec = decode_subspace(ch, &basis)?;
        let g = &basis * inv_sqrt_k;
        let deficit = distinguishability(ch, None, &g);
        points.push(DualityPoint {
            trial,
            k,
            subspace_kind: kind,
            fidelity: dec.fidelity.as_f64(),
            deficit: deficit.as_f64(),
            seed: trial_seed,
        });
        inputs.push(g);
    }
    let f = chained(ch, k, DEFAULT_SAMPLES, seed, &inputs)?;
    let forgetfulness = ForgetfulnessEstimate {
        k: f.k,
        lower_bound: f.lower_bound.as_f64(),
        samples: f.samples,
        fixed_state: f.fixed_state.map(|z| nalgebra::Complex::new(z.re.as_f64(), z.im.as_f64())),
        best_input: f.best_input.map(|z| nalgebra::Complex::new(z.re.as_f64(), z.im.as_f64())),
    };
    let slack = 1e3 * T::STATE_TOL;
    let checks = DualityChecks {
        decoding_bound: points.iter().all(|p| p.fidelity >= (1.0 - p.deficit / 2.0).max(0.0).powi(2) - slack),
        decoupling_bound: points.iter().all(|p| p.deficit <= 4.0 * (1.0 - p.fidelity).max(0.0).sqrt() + slack),
        forgetfulness_floor: points
            .iter()
            .filter(|p| p.fidelity < SUCCESS_FIDELITY)
            .all(|p| forgetfulness.lower_bound >= 1.0 - p.fidelity.sqrt() - slack),
        no_contradiction: !points.iter().any(|p| p.fidelity >= SUCCESS_FIDELITY && p.deficit >= ANTI_DECOUPLING),
    };
    Ok(DualityReport { k, envelope: running_max_envelope(&points), points, forgetfulness, checks })
}
