use super::{PResult, ProtocolError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::{HilbertError, MultipartiteState, MAX_DIM};
use crate::scalar::{cr, Real};

/// Projection of `A^n` onto eigen-strings `x` with `p(x) >= 2^{-n(H + δ)}`.
#[derive(Debug, Clone)]
pub struct TypicalProjection<T: Real> {
    pub n: usize,
    pub delta: f64,
    /// Single-copy eigenvalues, descending, and matching eigenvectors.
    pub spectrum: Vec<T>,
    pub eigenbasis: CMat<T>,
    /// Retained strings, each encoded base `d` with the first copy most significant.
    pub strings: Vec<usize>,
    pub dim: usize,
    pub weight: f64,
    /// Chebyshev bound on the discarded weight, `Var(-log p) / (n δ²)`.
    pub tail_bound: f64,
}

impl<T: Real> TypicalProjection<T> {
    /// `d^n x dim` isometry onto the typical subspace.
    pub fn isometry(&self) -> CMat<T> {
        let d = self.spectrum.len();
        let big = d.pow(self.n as u32);
        let mut w = CMat::<T>::zeros(big, self.dim);
        for (col, &s) in self.strings.iter().enumerate() {
            let mut v = CMat::<T>::from_element(1, 1, cr(T::one()));
            let mut rest = s;
            let mut digits = vec![0; self.n];
            for i in (0..self.n).rev() {
                digits[i] = rest % d;
                rest /= d;
            }
            for &x in &digits {
                v = linalg::kron(&v, &self.eigenbasis.columns(x, 1).into_owned());
            }
            w.set_column(col, &v.column(0));
        }
        w
    }

    pub fn projector(&self) -> CMat<T> {
        let w = self.isometry();
        &w * w.adjoint()
    }
}

/// Typical projection for `n` copies of the marginal of `psi` on `system`.
pub fn schumacher_project<T: Real>(
    psi: &MultipartiteState<T>,
    system: &str,
    n: usize,
    delta: f64,
) -> PResult<TypicalProjection<T>> {
    if n == 0 {
        return Err(ProtocolError::NoCopies);
    }
    if !(delta > 0.0) {
        return Err(ProtocolError::BadDelta(delta));
    }
    let rho = psi.partial_trace(&[system])?.density_matrix();
    let d = rho.nrows();
    let big = (d as u128).checked_pow(n as u32).filter(|&b| b <= MAX_DIM as u128);
    let big = big.ok_or(HilbertError::TooLarge(d.saturating_pow(n as u32)))? as usize;
    let (mut spectrum, eigenbasis) = linalg::eigh(&rho);
    linalg::clip_spectrum(&mut spectrum);
    let p: Vec<f64> = spectrum.iter().map(|x| x.as_f64().max(0.0)).collect();
    let logs: Vec<f64> = p.iter().map(|&x| if x > 0.0 { x.log2() } else { f64::NEG_INFINITY }).collect();
    let h: f64 = p.iter().zip(&logs).filter(|(x, _)| **x > 0.0).map(|(x, l)| -x * l).sum();
    let var: f64 = p.iter().zip(&logs).filter(|(x, _)| **x > 0.0).map(|(x, l)| x * (l + h) * (l + h)).sum();
    let threshold = -(n as f64) * (h + delta) - 1e-12;
    let mut strings = Vec::new();
    let mut weight = 0.0;
    for s in 0..big {
        let mut rest = s;
        let mut lp = 0.0;
        for _ in 0..n {
            lp += logs[rest % d];
            rest /= d;
        }
        if lp >= threshold {
            strings.push(s);
            weight += lp.exp2();
        }
    }
    Ok(TypicalProjection {
        n,
        delta,
        spectrum,
        eigenbasis,
        dim: strings.len(),
        strings,
        weight,
        tail_bound: (var / (n as f64 * delta * delta)).min(1.0),
    })
}
