//! Conditional min-entropy `H_min(A|R) = -log2 min { Tr s : rho_AR <= 1_A ⊗ s }`.
//!
//! The semidefinite program is solved by a log-barrier path-following Newton
//! method over Hermitian `s`. Every outer step yields a strictly feasible
//! primal point (upper bound on the optimal trace) and a dual point
//! `X = W / lambda_max(Tr_A W)` with `W = (1 ⊗ s - rho)^-1` (lower bound), so
//! the returned bracket is certified rather than estimated.

use nalgebra::Cholesky;

use super::{log2, EResult, EntropyError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::MultipartiteState;
use crate::scalar::{clip, cr, modulus, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinEntropySolver {
    /// Stop once the certified bracket is narrower than this many bits.
    pub tol_bits: f64,
    /// Cap on Newton iterations.
    pub max_iterations: usize,
}

impl Default for MinEntropySolver {
    fn default() -> Self {
        Self { tol_bits: 1e-6, max_iterations: 10_000 }
    }
}

impl MinEntropySolver {
    pub fn for_scalar<T: Real>() -> Self {
        Self { tol_bits: T::SOLVER_TOL, ..Self::default() }
    }
}

/// Certified bracket on `H_min(A|R)` in bits; `value` is its midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinEntropyBound<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
    pub iterations: usize,
}

/// `H_min(A|R)` for the reduced state on the systems `a` and `r`; any other
/// factor is traced out first.
pub fn min_entropy_cond<T: Real>(
    rho: &MultipartiteState<T>,
    a: &[&str],
    r: &[&str],
) -> EResult<MinEntropyBound<T>> {
    let keep: Vec<&str> = a.iter().chain(r).copied().collect();
    let reduced = rho.partial_trace(&keep)?.reorder(&keep)?;
    let d_a = reduced.dim_of(a)?;
    let d_r = reduced.dim_of(r)?;
    min_entropy_cond_matrix(&reduced.density_matrix(), d_a, d_r, MinEntropySolver::for_scalar::<T>())
}

/// Same on a raw `(d_a * d_r)`-square matrix with A as the leading factor.
/// Subnormalized inputs are allowed.
pub fn min_entropy_cond_matrix<T: Real>(
    rho: &CMat<T>,
    d_a: usize,
    d_r: usize,
    solver: MinEntropySolver,
) -> EResult<MinEntropyBound<T>> {
    let n = d_a * d_r;
    assert_eq!(rho.nrows(), n, "matrix dimension must be d_a * d_r");
    let rho = linalg::hermitize(rho);
    let spec = linalg::eigvalsh(&rho);
    let lmax = spec.first().copied().unwrap_or(T::zero());
    if let Some(&min) = spec.last() {
        if min < -clip::<T>() {
            return Err(EntropyError::NotPsd(min.as_f64()));
        }
    }
    if lmax <= T::zero() {
        return Err(EntropyError::ZeroState);
    }
    if d_r == 1 {
        let v = -log2(lmax);
        return Ok(MinEntropyBound { value: v, lower: v, upper: v, iterations: 0 });
    }
    if is_diagonal(&rho) {
        // classical case: optimal s = diag_r max_a p(a, r)
        let t = (0..d_r).fold(T::zero(), |acc, r| {
            acc + (0..d_a).fold(T::zero(), |m, a| m.max(rho[(a * d_r + r, a * d_r + r)].re))
        });
        let v = -log2(t);
        return Ok(MinEntropyBound { value: v, lower: v, upper: v, iterations: 0 });
    }
    let (lo_t, hi_t, iterations) = barrier(&rho, d_a, d_r, lmax, solver)?;
    Ok(MinEntropyBound {
        value: -log2((lo_t * hi_t).sqrt()),
        lower: -log2(hi_t),
        upper: -log2(lo_t),
        iterations,
    })
}

fn is_diagonal<T: Real>(m: &CMat<T>) -> bool {
    let scale = T::lit(1e-13) * linalg::trace(m).re.abs().max(T::lit(1e-300));
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j && modulus(m[(i, j)]) > scale {
                return false;
            }
        }
    }
    true
}

fn trace_a<T: Real>(m: &CMat<T>, d_a: usize, d_r: usize) -> CMat<T> {
    CMat::from_fn(d_r, d_r, |r, s| {
        (0..d_a).fold(cr(T::zero()), |acc, a| acc + m[(a * d_r + r, a * d_r + s)])
    })
}

fn id_kron<T: Real>(s: &CMat<T>, d_a: usize) -> CMat<T> {
    let d_r = s.nrows();
    let mut out = CMat::zeros(d_a * d_r, d_a * d_r);
    for a in 0..d_a {
        out.view_mut((a * d_r, a * d_r), (d_r, d_r)).copy_from(s);
    }
    out
}

/// Cholesky factor of `1 ⊗ s - rho`, or `None` unless it is positive definite.
///
/// The complex square root never fails, so a negative pivot shows up as a
/// (near) imaginary diagonal entry of the factor; reject those explicitly.
fn slack<T: Real>(s: &CMat<T>, rho: &CMat<T>, d_a: usize) -> Option<Cholesky<nalgebra::Complex<T>, nalgebra::Dyn>> {
    let chol = Cholesky::new(linalg::hermitize(&(id_kron(s, d_a) - rho)))?;
    let l = chol.l_dirty();
    let ok = (0..l.nrows()).all(|i| {
        let d = l[(i, i)];
        d.re > T::zero() && d.im.abs() <= d.re * T::lit(1e-6)
    });
    ok.then_some(chol)
}

/// Barrier objective `tau Tr s - log det(1 ⊗ s - rho)`; `None` if infeasible.
fn barrier_value<T: Real>(s: &CMat<T>, rho: &CMat<T>, d_a: usize, tau: T) -> Option<T> {
    let chol = slack(s, rho, d_a)?;
    let l = chol.l_dirty();
    let logdet = (0..l.nrows()).fold(T::zero(), |acc, i| acc + l[(i, i)].re.ln());
    Some(tau * linalg::trace(s).re - T::lit(2.0) * logdet)
}

/// Returns a certified bracket `[lo, hi]` on the optimal trace.
fn barrier<T: Real>(
    rho: &CMat<T>,
    d_a: usize,
    d_r: usize,
    lmax: T,
    solver: MinEntropySolver,
) -> EResult<(T, T, usize)> {
    let n = d_a * d_r;
    let nf = T::from_usize(n).unwrap();
    let c = lmax * T::lit(1.01) + T::lit(1e-12);
    let mut s = CMat::<T>::identity(d_r, d_r) * cr(c);
    let mut hi = c * T::from_usize(d_r).unwrap();
    let rho_r = trace_a(rho, d_a, d_r);
    let mut lo = (rho * rho).trace().re / linalg::eigvalsh(&rho_r)[0];
    let mut tau = nf / (hi - lo).max(T::lit(1e-12));
    let mut iterations = 0usize;
    let tol = T::lit(solver.tol_bits);
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let dec_stop = T::lit(1e-12).max(T::lit(T::EIG_CLIP * 1e-2));

    let fail = |lo: T, hi: T, iterations: usize| EntropyError::NonConvergence {
        lower: (-log2(hi)).as_f64(),
        upper: (-log2(lo)).as_f64(),
        iterations,
    };

    loop {
        let mut w = CMat::zeros(n, n);
        for _ in 0..100 {
            iterations += 1;
            if iterations > solver.max_iterations {
                return Err(fail(lo, hi, iterations - 1));
            }
            let chol = slack(&s, rho, d_a).ok_or_else(|| fail(lo, hi, iterations))?;
            w = linalg::hermitize(&chol.inverse());
            let grad = CMat::<T>::identity(d_r, d_r) * cr(tau) - trace_a(&w, d_a, d_r);
            let step = newton_step(&w, &grad, d_a, d_r).ok_or_else(|| fail(lo, hi, iterations))?;
            let dec = -(&grad * &step).trace().re;
            if dec * half < dec_stop {
                break;
            }
            let f0 = barrier_value(&s, rho, d_a, tau).ok_or_else(|| fail(lo, hi, iterations))?;
            let mut t = T::one();
            loop {
                let cand = &s + &step * cr(t);
                if let Some(f) = barrier_value(&cand, rho, d_a, tau) {
                    if f <= f0 - quarter * t * dec {
                        s = cand;
                        break;
                    }
                }
                t *= half;
                if t < T::lit(1e-20) {
                    break;
                }
            }
            if t < T::lit(1e-20) {
                break;
            }
        }
        if slack(&s, rho, d_a).is_some() {
            hi = hi.min(linalg::trace(&s).re);
        }
        let x_r = trace_a(&w, d_a, d_r);
        let top = linalg::eigvalsh(&x_r)[0];
        if top > T::zero() {
            lo = lo.max((rho * &w).trace().re / top);
        }
        if log2(hi / lo) <= tol {
            return Ok((lo, hi, iterations));
        }
        tau *= T::lit(8.0);
    }
}

/// Solve `Tr_A[W (1 ⊗ D) W] = -grad` for Hermitian `D`.
fn newton_step<T: Real>(w: &CMat<T>, grad: &CMat<T>, d_a: usize, d_r: usize) -> Option<CMat<T>> {
    let m2 = d_r * d_r;
    // M[(r,s),(j,k)] = sum_{a,b} W[(b,r),(a,j)] W[(a,k),(b,s)]
    let mut m = CMat::<T>::zeros(m2, m2);
    for a in 0..d_a {
        for b in 0..d_a {
            let w_ba = w.view((b * d_r, a * d_r), (d_r, d_r));
            let w_ab = w.view((a * d_r, b * d_r), (d_r, d_r));
            for r in 0..d_r {
                for j in 0..d_r {
                    let x = w_ba[(r, j)];
                    for s in 0..d_r {
                        for k in 0..d_r {
                            m[(r * d_r + s, j * d_r + k)] += x * w_ab[(k, s)];
                        }
                    }
                }
            }
        }
    }
    let rhs = nalgebra::DVector::from_fn(m2, |i, _| -grad[(i / d_r, i % d_r)]);
    let sol = m.lu().solve(&rhs)?;
    let step = CMat::from_fn(d_r, d_r, |r, s| sol[r * d_r + s]);
    Some(linalg::hermitize(&step))
}
