//! Von Neumann, min- and max-entropies, smoothing, and the tripartite
//! entropy report. All logarithms are base 2.

mod minentropy;
mod smooth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{linalg, HilbertError, MultipartiteState, StateData};
use crate::scalar::{clip, Real};

pub use minentropy::{min_entropy_cond, min_entropy_cond_matrix, MinEntropyBound, MinEntropySolver};
pub use smooth::{
    iid_spectrum, max_entropy_spectrum, min_entropy_spectrum, one_shot_entropies, smooth,
    smooth_max_entropy_spectrum, smooth_min_entropy_spectrum, EntropyKind, OneShotEntropies,
    MAX_SMOOTHING,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("expected a pure state")]
    NotPure,
    #[error("expected a tripartite state, got {0} factors")]
    NotTripartite(usize),
    #[error("smoothing parameter {0} outside [0, 0.3]")]
    EpsilonOutOfRange(f64),
    #[error("state has zero trace")]
    ZeroState,
    #[error(
        "min-entropy solver did not converge after {iterations} iterations; \
         H_min lies in [{lower:.9}, {upper:.9}] bits"
    )]
    NonConvergence { lower: f64, upper: f64, iterations: usize },
}

type EResult<T> = Result<T, EntropyError>;

/// Clipped spectrum of a state, rejecting eigenvalues below `-EIG_CLIP`.
pub fn checked_spectrum<T: Real>(rho: &MultipartiteState<T>) -> EResult<Vec<T>> {
    match rho.data() {
        StateData::Pure(_) => Ok(rho.spectrum()),
        StateData::Mixed(m) => {
            let mut vals = linalg::eigvalsh(m);
            if let Some(&min) = vals.last() {
                if min < -clip::<T>() {
                    return Err(EntropyError::NotPsd(min.as_f64()));
                }
            }
            linalg::clip_spectrum(&mut vals);
            Ok(vals)
        }
    }
}

/// `-sum p log2 p` with `0 log 0 = 0`; negative entries are ignored.
pub fn shannon<T: Real>(p: &[T]) -> T {
    let ln2 = T::ln_2();
    p.iter()
        .filter(|&&x| x > T::zero())
        .fold(T::zero(), |acc, &x| acc - x * x.ln() / ln2)
}

pub fn log2<T: Real>(x: T) -> T {
    x.ln() / T::ln_2()
}

pub fn von_neumann<T: Real>(rho: &MultipartiteState<T>) -> EResult<T> {
    Ok(shannon(&checked_spectrum(rho)?))
}

/// `H_max(A) = 2 log2 Tr sqrt(rho)`.
pub fn max_entropy<T: Real>(rho: &MultipartiteState<T>) -> EResult<T> {
    Ok(max_entropy_spectrum(&checked_spectrum(rho)?))
}

/// `H_min(A) = -log2 lambda_max(rho)`.
pub fn min_entropy<T: Real>(rho: &MultipartiteState<T>) -> EResult<T> {
    min_entropy_spectrum(&checked_spectrum(rho)?)
}

/// Marginal entropies of a pure tripartite state `psi_ABR`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    #[serde(rename = "hA")]
    pub h_a: f64,
    #[serde(rename = "hB")]
    pub h_b: f64,
    #[serde(rename = "hAB")]
    pub h_ab: f64,
    #[serde(rename = "hR")]
    pub h_r: f64,
    /// `H(A|B)`
    #[serde(rename = "condAB")]
    pub cond_ab: f64,
    /// `I(A:R)`, from `H(A) + H(R) - H(AR)`
    #[serde(rename = "mutAR")]
    pub mut_ar: f64,
    #[serde(rename = "mutAB")]
    pub mut_ab: f64,
    /// `I_c(A>B) = -H(A|B)`
    #[serde(rename = "coherentInfo")]
    pub coherent_info: f64,
}

impl EntropyReport {
    /// Report for a three-factor pure state read in order `(A, B, R)`.
    pub fn from_state<T: Real>(psi: &MultipartiteState<T>) -> EResult<Self> {
        if psi.factors().len() != 3 {
            return Err(EntropyError::NotTripartite(psi.factors().len()));
        }
        let names: Vec<String> = psi.names().iter().map(|s| s.to_string()).collect();
        Self::from_groups(psi, &[&names[0]], &[&names[1]], &[&names[2]])
    }

    /// Report for a pure state whose factors are grouped into A, B and R.
    pub fn from_groups<T: Real>(
        psi: &MultipartiteState<T>,
        a: &[&str],
        b: &[&str],
        r: &[&str],
    ) -> EResult<Self> {
        if !psi.is_pure() {
            return Err(EntropyError::NotPure);
        }
        let all: Vec<&str> = a.iter().chain(b).chain(r).copied().collect();
        if all.len() != psi.factors().len() {
            return Err(EntropyError::NotTripartite(psi.factors().len()));
        }
        let h = |keep: Vec<&str>| -> EResult<f64> {
            Ok(von_neumann(&psi.partial_trace(&keep)?)?.as_f64())
        };
        let h_a = h(a.to_vec())?;
        let h_b = h(b.to_vec())?;
        let h_r = h(r.to_vec())?;
        let h_ab = h(a.iter().chain(b).copied().collect())?;
        let h_ar = h(a.iter().chain(r).copied().collect())?;
        let cond_ab = h_ab - h_b;
        Ok(Self {
            h_a,
            h_b,
            h_ab,
            h_r,
            cond_ab,
            mut_ar: h_a + h_r - h_ar,
            mut_ab: h_a + h_b - h_ab,
            coherent_info: 0.0 - cond_ab,
        })
    }
}
