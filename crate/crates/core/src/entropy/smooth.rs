//! Smoothed entropies over the eigenbasis truncation family.
//!
//! This is a restriction of the full epsilon-ball optimization: candidates are
//! only states diagonal in the eigenbasis of the input, obtained by removing
//! the smallest eigenvalues (max-entropy, renormalized) or capping the
//! largest ones (min-entropy, subnormalized). Distances are purified
//! distances. The results are therefore bounds from the restricted family,
//! not the exact smooth entropies.

use serde::{Deserialize, Serialize};

use super::minentropy::{min_entropy_cond_matrix, MinEntropySolver};
use super::{checked_spectrum, log2, EResult, EntropyError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::{HilbertError, MultipartiteState, MAX_DIM};
use crate::scalar::{cr, Real};

/// Largest accepted smoothing parameter.
pub const MAX_SMOOTHING: f64 = 0.3;

/// Label attached to every smoothed report.
pub const SMOOTHING_FAMILY: &str = "eigenbasis-truncation";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntropyKind {
    Max,
    Min,
    /// `H_min(A|R)` with the listed systems on each side.
    MinConditional { a: Vec<String>, r: Vec<String> },
}

/// Smoothed one-shot quantities used by the one-shot ledgers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneShotEntropies {
    /// `H_min^eps(A|R)` in bits
    #[serde(rename = "hMinCond")]
    pub h_min_cond: f64,
    /// `H_max^eps(A)` in bits
    #[serde(rename = "hMax")]
    pub h_max: f64,
    pub epsilon: f64,
    pub smoothing: String,
}

fn check_epsilon(eps: f64) -> EResult<()> {
    if !(0.0..=MAX_SMOOTHING).contains(&eps) {
        return Err(EntropyError::EpsilonOutOfRange(eps));
    }
    Ok(())
}

pub fn max_entropy_spectrum<T: Real>(p: &[T]) -> T {
    let s = p.iter().filter(|&&x| x > T::zero()).fold(T::zero(), |acc, &x| acc + x.sqrt());
    T::lit(2.0) * log2(s)
}

pub fn min_entropy_spectrum<T: Real>(p: &[T]) -> EResult<T> {
    let top = p.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if top <= T::zero() {
        return Err(EntropyError::ZeroState);
    }
    Ok(-log2(top))
}

/// `H_max^eps` over renormalized truncations removing tail mass `<= eps^2`
/// (purified distance `sqrt(tail) <= eps`). The boundary eigenvalue may be
/// removed partially.
pub fn smooth_max_entropy_spectrum<T: Real>(p: &[T], eps: f64) -> EResult<T> {
    check_epsilon(eps)?;
    let mut q: Vec<T> = p.iter().copied().filter(|&x| x > T::zero()).collect();
    if q.is_empty() {
        return Err(EntropyError::ZeroState);
    }
    q.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total = q.iter().fold(T::zero(), |a, &b| a + b);
    for x in q.iter_mut() {
        *x /= total;
    }
    let value = |kept: &[T], boundary: Option<T>| -> T {
        let mut s = T::zero();
        let mut w = T::zero();
        for &x in kept {
            s += x.sqrt();
            w += x;
        }
        if let Some(b) = boundary {
            s += b.sqrt();
            w += b;
        }
        T::lit(2.0) * log2(s) - log2(w)
    };
    let budget = T::lit(eps * eps);
    let mut best = value(&q, None);
    let mut removed = T::zero();
    for k in 0..q.len() - 1 {
        // partially shave the k-th smallest eigenvalue with what is left
        let left = budget - removed;
        if left <= T::zero() {
            break;
        }
        if q[k] > left {
            best = best.min(value(&q[k + 1..], Some(q[k] - left)));
            break;
        }
        removed += q[k];
        best = best.min(value(&q[k + 1..], None));
    }
    Ok(best)
}

/// Smallest cap `c` such that capping the spectrum at `c` keeps generalized
/// fidelity `sum sqrt(p_i min(p_i, c)) >= sqrt(1 - eps^2)`.
fn min_cap<T: Real>(p: &[T], eps: f64) -> T {
    let mut q: Vec<T> = p.iter().copied().filter(|&x| x > T::zero()).collect();
    q.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let target = T::lit((1.0 - eps * eps).sqrt());
    if eps == 0.0 || q.is_empty() {
        return q.first().copied().unwrap_or(T::zero());
    }
    let mut tail: T = q.iter().fold(T::zero(), |a, &b| a + b);
    let mut top_sqrt = T::zero();
    for k in 0..q.len() {
        // cap covers the top k+1 eigenvalues: g(c) = sqrt(c) * top_sqrt + tail
        top_sqrt += q[k].sqrt();
        tail -= q[k];
        let need = (target - tail).max(T::zero()) / top_sqrt;
        let c = need * need;
        let floor = q.get(k + 1).copied().unwrap_or(T::zero());
        if c >= floor {
            return c.min(q[k]);
        }
    }
    T::zero()
}

/// `H_min^eps` over subnormalized caps of the largest eigenvalues.
pub fn smooth_min_entropy_spectrum<T: Real>(p: &[T], eps: f64) -> EResult<T> {
    check_epsilon(eps)?;
    let c = min_cap(p, eps);
    if c <= T::zero() {
        return Err(EntropyError::ZeroState);
    }
    Ok(-log2(c))
}

/// Spectrum of `rho^{⊗n}` from the spectrum of `rho`.
pub fn iid_spectrum<T: Real>(p: &[T], n: usize) -> Result<Vec<T>, HilbertError> {
    let len = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(p.len()).filter(|&x| x <= MAX_DIM));
    let len = len.ok_or(HilbertError::TooLarge(usize::MAX))?;
    let mut out = vec![T::one()];
    out.reserve(len);
    for _ in 0..n {
        out = out.iter().flat_map(|&x| p.iter().map(move |&y| x * y)).collect();
    }
    Ok(out)
}

/// Apply the min-entropy cap to a density matrix in its eigenbasis.
fn cap_matrix<T: Real>(m: &CMat<T>, eps: f64) -> CMat<T> {
    if eps == 0.0 {
        return m.clone();
    }
    let diag = (0..m.nrows()).all(|i| {
        (0..m.ncols()).all(|j| i == j || crate::scalar::modulus(m[(i, j)]) == T::zero())
    });
    if diag {
        let p: Vec<T> = (0..m.nrows()).map(|i| m[(i, i)].re).collect();
        let c = min_cap(&p, eps);
        return CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
            if i == j {
                cr(p[i].min(c))
            } else {
                cr(T::zero())
            }
        });
    }
    let (mut vals, vecs) = linalg::eigh(m);
    linalg::clip_spectrum(&mut vals);
    let c = min_cap(&vals, eps);
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let f = cr(v.max(T::zero()).min(c));
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= f;
        }
    }
    scaled * vecs.adjoint()
}

fn smooth_min_cond_matrix<T: Real>(m: &CMat<T>, d_a: usize, d_r: usize, eps: f64) -> EResult<T> {
    check_epsilon(eps)?;
    let capped = cap_matrix(m, eps);
    Ok(min_entropy_cond_matrix(&capped, d_a, d_r, MinEntropySolver::for_scalar::<T>())?.value)
}

/// Smoothed entropy of the given kind.
pub fn smooth<T: Real>(kind: &EntropyKind, rho: &MultipartiteState<T>, eps: f64) -> EResult<T> {
    check_epsilon(eps)?;
    match kind {
        EntropyKind::Max => smooth_max_entropy_spectrum(&checked_spectrum(rho)?, eps),
        EntropyKind::Min => smooth_min_entropy_spectrum(&checked_spectrum(rho)?, eps),
        EntropyKind::MinConditional { a, r } => {
            let a: Vec<&str> = a.iter().map(String::as_str).collect();
            let r: Vec<&str> = r.iter().map(String::as_str).collect();
            let keep: Vec<&str> = a.iter().chain(&r).copied().collect();
            let reduced = rho.partial_trace(&keep)?.reorder(&keep)?;
            checked_spectrum(&reduced)?;
            smooth_min_cond_matrix(&reduced.density_matrix(), reduced.dim_of(&a)?, reduced.dim_of(&r)?, eps)
        }
    }
}

/// `H_max^eps(A^n)` and `H_min^eps(A^n|R^n)` for `n` copies of `psi`.
pub fn one_shot_entropies<T: Real>(
    psi: &MultipartiteState<T>,
    a: &[&str],
    r: &[&str],
    copies: usize,
    eps: f64,
) -> EResult<OneShotEntropies> {
    check_epsilon(eps)?;
    let copies = copies.max(1);
    let keep: Vec<&str> = a.iter().chain(r).copied().collect();
    let single = psi.partial_trace(&keep)?.reorder(&keep)?.merge(a, "A")?.merge(r, "R")?;
    let d_a = single.label("A")?.dim;
    let d_r = single.label("R")?.dim;
    let spec_a = checked_spectrum(&single.partial_trace(&["A"])?)?;
    let h_max = smooth_max_entropy_spectrum(&iid_spectrum(&spec_a, copies)?, eps)?;

    let rho1 = single.density_matrix();
    let (rho_n, da_n, dr_n) = if copies == 1 {
        (rho1, d_a, d_r)
    } else {
        let mut parts = Vec::with_capacity(copies);
        for i in 0..copies {
            parts.push(single.rename("A", &format!("A{i}"))?.rename("R", &format!("R{i}"))?.to_mixed());
        }
        let refs: Vec<&MultipartiteState<T>> = parts.iter().collect();
        let joint = MultipartiteState::tensor(&refs)?;
        let names_a: Vec<String> = (0..copies).map(|i| format!("A{i}")).collect();
        let names_r: Vec<String> = (0..copies).map(|i| format!("R{i}")).collect();
        let order: Vec<&str> = names_a.iter().chain(&names_r).map(String::as_str).collect();
        let m = joint.reorder(&order)?.density_matrix();
        (m, d_a.pow(copies as u32), d_r.pow(copies as u32))
    };
    let h_min_cond = smooth_min_cond_matrix(&rho_n, da_n, dr_n, eps)?;
    Ok(OneShotEntropies {
        h_min_cond: h_min_cond.as_f64(),
        h_max: h_max.as_f64(),
        epsilon: eps,
        smoothing: SMOOTHING_FAMILY.to_string(),
    })
}
