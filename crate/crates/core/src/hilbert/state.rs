use serde::{Deserialize, Serialize};

use super::linalg::{self, CMat, CVec};
use super::{HilbertError, MAX_DIM};
use crate::scalar::{cr, tol, Real};

type HResult<T> = Result<T, HilbertError>;

/// Named tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemLabel {
    pub name: String,
    pub dim: usize,
}

impl SystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> HResult<Self> {
        let name = name.into();
        if dim == 0 {
            return Err(HilbertError::InvalidLabel {
                name,
                reason: "dimension must be at least 1".into(),
            });
        }
        if name.is_empty() {
            return Err(HilbertError::InvalidLabel {
                name,
                reason: "name must be non-empty".into(),
            });
        }
        Ok(Self { name, dim })
    }
}

/// Convenience for tests and examples; panics on a zero dimension.
pub fn label(name: &str, dim: usize) -> SystemLabel {
    SystemLabel::new(name, dim).expect("valid label")
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateData<T: Real> {
    Pure(CVec<T>),
    Mixed(CMat<T>),
}

/// Pure or mixed state over an ordered, labeled tensor factorization.
///
/// Row-major layout: the first factor is the most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState<T: Real> {
    factors: Vec<SystemLabel>,
    data: StateData<T>,
}

fn check_factors(factors: &[SystemLabel]) -> HResult<usize> {
    for (i, f) in factors.iter().enumerate() {
        if f.dim == 0 {
            return Err(HilbertError::InvalidLabel {
                name: f.name.clone(),
                reason: "dimension must be at least 1".into(),
            });
        }
        if factors[..i].iter().any(|g| g.name == f.name) {
            return Err(HilbertError::NameCollision(f.name.clone()));
        }
    }
    let mut total = 1usize;
    for f in factors {
        total = total
            .checked_mul(f.dim)
            .filter(|&t| t <= MAX_DIM)
            .ok_or(HilbertError::TooLarge(total.saturating_mul(f.dim)))?;
    }
    Ok(total)
}

impl<T: Real> MultipartiteState<T> {
    /// Validated pure state (unit norm within tolerance).
    pub fn pure(factors: Vec<SystemLabel>, vector: CVec<T>) -> HResult<Self> {
        let total = check_factors(&factors)?;
        if vector.len() != total {
            return Err(HilbertError::DimensionMismatch(format!(
                "vector length {} but factors multiply to {total}",
                vector.len()
            )));
        }
        let norm = vector.norm();
        if (norm - T::one()).abs() > tol::<T>() {
            return Err(HilbertError::InvalidState(format!(
                "pure state has norm {norm}, expected 1"
            )));
        }
        Ok(Self { factors, data: StateData::Pure(vector) })
    }

    /// Validated density matrix: Hermitian, PSD and unit trace within tolerance.
    pub fn mixed(factors: Vec<SystemLabel>, matrix: CMat<T>) -> HResult<Self> {
        let total = check_factors(&factors)?;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(HilbertError::DimensionMismatch(format!(
                "matrix is {}x{} but factors multiply to {total}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol::<T>() {
            return Err(HilbertError::InvalidState(format!(
                "matrix is not Hermitian (defect {herm})"
            )));
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - T::one()).abs() > tol::<T>() {
            return Err(HilbertError::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = linalg::eigvalsh(&matrix).last().copied().unwrap_or(T::zero());
        if min < -crate::scalar::clip::<T>() {
            return Err(HilbertError::InvalidState(format!(
                "matrix is not positive semidefinite (eigenvalue {min})"
            )));
        }
        Ok(Self { factors, data: StateData::Mixed(linalg::hermitize(&matrix)) })
    }

    /// Unnormalized pure vector; used for subnormalized projected states.
    pub fn unnormalized_pure(factors: Vec<SystemLabel>, vector: CVec<T>) -> HResult<Self> {
        let total = check_factors(&factors)?;
        if vector.len() != total {
            return Err(HilbertError::DimensionMismatch(format!(
                "vector length {} but factors multiply to {total}",
                vector.len()
            )));
        }
        Ok(Self { factors, data: StateData::Pure(vector) })
    }

    /// Computational basis state `|i>`.
    pub fn basis(factors: Vec<SystemLabel>, index: usize) -> HResult<Self> {
        let total = check_factors(&factors)?;
        if index >= total {
            return Err(HilbertError::DimensionMismatch(format!(
                "basis index {index} out of range for dimension {total}"
            )));
        }
        let mut v = CVec::zeros(total);
        v[index] = cr(T::one());
        Ok(Self { factors, data: StateData::Pure(v) })
    }

    /// `sum_i |ii> / sqrt(d)` on two systems of equal dimension.
    pub fn max_entangled(a: &str, b: &str, d: usize) -> HResult<Self> {
        let factors = vec![SystemLabel::new(a, d)?, SystemLabel::new(b, d)?];
        check_factors(&factors)?;
        let mut v = CVec::zeros(d * d);
        let amp = cr(T::one() / T::from_usize(d).unwrap().sqrt());
        for i in 0..d {
            v[i * d + i] = amp;
        }
        Ok(Self { factors, data: StateData::Pure(v) })
    }

    /// `(|0...0> + |1...1>)/sqrt(2)` on qubits with the given names.
    pub fn ghz(names: &[&str]) -> HResult<Self> {
        let factors = names
            .iter()
            .map(|n| SystemLabel::new(*n, 2))
            .collect::<HResult<Vec<_>>>()?;
        let total = check_factors(&factors)?;
        let mut v = CVec::zeros(total);
        let amp = cr(T::lit(std::f64::consts::FRAC_1_SQRT_2));
        v[0] = amp;
        v[total - 1] = amp;
        Ok(Self { factors, data: StateData::Pure(v) })
    }

    /// `I/d` on a single system.
    pub fn maximally_mixed(name: &str, d: usize) -> HResult<Self> {
        let factors = vec![SystemLabel::new(name, d)?];
        check_factors(&factors)?;
        let m = CMat::identity(d, d) * cr(T::one() / T::from_usize(d).unwrap());
        Ok(Self { factors, data: StateData::Mixed(m) })
    }

    pub fn factors(&self) -> &[SystemLabel] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn data(&self) -> &StateData<T> {
        &self.data
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn vector(&self) -> Option<&CVec<T>> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Mixed(_) => None,
        }
    }

    pub fn density_matrix(&self) -> CMat<T> {
        match &self.data {
            StateData::Pure(v) => linalg::outer(v, v),
            StateData::Mixed(m) => m.clone(),
        }
    }

    /// Same state as a mixed density matrix.
    pub fn to_mixed(&self) -> Self {
        Self { factors: self.factors.clone(), data: StateData::Mixed(self.density_matrix()) }
    }

    pub fn trace(&self) -> T {
        match &self.data {
            StateData::Pure(v) => v.norm_squared(),
            StateData::Mixed(m) => linalg::trace(m).re,
        }
    }

    pub fn purity(&self) -> T {
        match &self.data {
            StateData::Pure(v) => v.norm_squared() * v.norm_squared(),
            StateData::Mixed(m) => (m * m).trace().re,
        }
    }

    /// Spectrum of the density matrix, descending, tiny negatives clipped.
    pub fn spectrum(&self) -> Vec<T> {
        let mut vals = match &self.data {
            StateData::Pure(v) => {
                let mut s = vec![T::zero(); v.len()];
                if let Some(first) = s.first_mut() {
                    *first = v.norm_squared();
                }
                s
            }
            StateData::Mixed(m) => linalg::eigvalsh(m),
        };
        linalg::clip_spectrum(&mut vals);
        vals
    }

    pub fn position(&self, name: &str) -> HResult<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| HilbertError::UnknownSystem(name.to_string()))
    }

    pub fn label(&self, name: &str) -> HResult<&SystemLabel> {
        Ok(&self.factors[self.position(name)?])
    }

    pub fn dim_of(&self, names: &[&str]) -> HResult<usize> {
        names.iter().try_fold(1usize, |acc, n| Ok(acc * self.label(n)?.dim))
    }

    /// Kronecker product in the given order.
    pub fn tensor(states: &[&Self]) -> HResult<Self> {
        let mut factors = Vec::new();
        for s in states {
            factors.extend(s.factors.iter().cloned());
        }
        check_factors(&factors)?;
        let all_pure = states.iter().all(|s| s.is_pure());
        let data = if all_pure {
            let mut v = CVec::from_element(1, cr(T::one()));
            for s in states {
                v = linalg::kron_vec(&v, s.vector().unwrap());
            }
            StateData::Pure(v)
        } else {
            let mut m = CMat::from_element(1, 1, cr(T::one()));
            for s in states {
                m = linalg::kron(&m, &s.density_matrix());
            }
            StateData::Mixed(m)
        };
        Ok(Self { factors, data })
    }

    pub fn tensor_with(&self, other: &Self) -> HResult<Self> {
        Self::tensor(&[self, other])
    }

    /// Reduced state on `keep`; kept factors retain their original order.
    pub fn partial_trace(&self, keep: &[&str]) -> HResult<Self> {
        let mut keep_pos = Vec::with_capacity(keep.len());
        for k in keep {
            let p = self.position(k)?;
            if keep_pos.contains(&p) {
                return Err(HilbertError::NameCollision(k.to_string()));
            }
            keep_pos.push(p);
        }
        keep_pos.sort_unstable();
        let traced: Vec<usize> =
            (0..self.factors.len()).filter(|p| !keep_pos.contains(p)).collect();
        let kept_factors: Vec<SystemLabel> =
            keep_pos.iter().map(|&p| self.factors[p].clone()).collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }
        let dk: usize = kept_factors.iter().map(|f| f.dim).product();
        let dt: usize = traced.iter().map(|&p| self.factors[p].dim).product();
        let mut perm = keep_pos.clone();
        perm.extend(traced.iter().copied());
        let map = linalg::permutation_map(&self.dims(), &perm);
        let reduced = match &self.data {
            StateData::Pure(v) => {
                // M[k, t] = psi[k*dt + t] in the permuted layout
                let mut m = CMat::<T>::zeros(dk, dt);
                for (old, &new) in map.iter().enumerate() {
                    m[(new / dt, new % dt)] = v[old];
                }
                &m * m.adjoint()
            }
            StateData::Mixed(rho) => {
                let total = dk * dt;
                let mut inv = vec![0usize; total];
                for (old, &new) in map.iter().enumerate() {
                    inv[new] = old;
                }
                let mut out = CMat::<T>::zeros(dk, dk);
                for i in 0..dk {
                    for j in 0..dk {
                        let mut acc = cr(T::zero());
                        for t in 0..dt {
                            acc += rho[(inv[i * dt + t], inv[j * dt + t])];
                        }
                        out[(i, j)] = acc;
                    }
                }
                out
            }
        };
        Ok(Self { factors: kept_factors, data: StateData::Mixed(reduced) })
    }

    /// Reduced state with the named systems traced out.
    pub fn trace_out(&self, traced: &[&str]) -> HResult<Self> {
        for t in traced {
            self.position(t)?;
        }
        let keep: Vec<&str> =
            self.names().into_iter().filter(|n| !traced.contains(n)).collect();
        self.partial_trace(&keep)
    }

    /// Permute factors into the given order (must name every factor once).
    pub fn reorder(&self, order: &[&str]) -> HResult<Self> {
        if order.len() != self.factors.len() {
            return Err(HilbertError::DimensionMismatch(format!(
                "reorder lists {} systems but state has {}",
                order.len(),
                self.factors.len()
            )));
        }
        let mut perm = Vec::with_capacity(order.len());
        for n in order {
            let p = self.position(n)?;
            if perm.contains(&p) {
                return Err(HilbertError::NameCollision(n.to_string()));
            }
            perm.push(p);
        }
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let factors: Vec<SystemLabel> = perm.iter().map(|&p| self.factors[p].clone()).collect();
        let map = linalg::permutation_map(&self.dims(), &perm);
        let data = match &self.data {
            StateData::Pure(v) => {
                let mut out = CVec::zeros(v.len());
                for (old, &new) in map.iter().enumerate() {
                    out[new] = v[old];
                }
                StateData::Pure(out)
            }
            StateData::Mixed(m) => {
                let n = m.nrows();
                let mut out = CMat::zeros(n, n);
                for j in 0..n {
                    for i in 0..n {
                        out[(map[i], map[j])] = m[(i, j)];
                    }
                }
                StateData::Mixed(out)
            }
        };
        Ok(Self { factors, data })
    }

    /// Fuse the named systems, in the listed order, into one factor placed at
    /// the position of the first of them.
    pub fn merge(&self, names: &[&str], merged: &str) -> HResult<Self> {
        if names.is_empty() {
            return Err(HilbertError::DimensionMismatch("nothing to merge".into()));
        }
        let first = names
            .iter()
            .map(|n| self.position(n))
            .collect::<HResult<Vec<_>>>()?
            .into_iter()
            .min()
            .unwrap();
        let rest: Vec<&str> = self.names().into_iter().filter(|n| !names.contains(n)).collect();
        let before = self.factors[..first]
            .iter()
            .filter(|f| !names.contains(&f.name.as_str()))
            .count();
        let mut order: Vec<&str> = rest[..before].to_vec();
        order.extend(names.iter().copied());
        order.extend(rest[before..].iter().copied());
        let mut s = self.reorder(&order)?;
        let dim = s.dim_of(names)?;
        let mut factors: Vec<SystemLabel> = s.factors[..before].to_vec();
        factors.push(SystemLabel::new(merged, dim)?);
        factors.extend(s.factors[before + names.len()..].iter().cloned());
        check_factors(&factors)?;
        s.factors = factors;
        Ok(s)
    }

    /// Split one factor into consecutive parts whose dimensions multiply to it.
    pub fn split(&self, name: &str, parts: &[(&str, usize)]) -> HResult<Self> {
        let p = self.position(name)?;
        let prod: usize = parts.iter().map(|x| x.1).product();
        if prod != self.factors[p].dim {
            return Err(HilbertError::DimensionMismatch(format!(
                "parts multiply to {prod} but {name} has dimension {}",
                self.factors[p].dim
            )));
        }
        let mut factors = self.factors[..p].to_vec();
        for (n, d) in parts {
            factors.push(SystemLabel::new(*n, *d)?);
        }
        factors.extend(self.factors[p + 1..].iter().cloned());
        check_factors(&factors)?;
        Ok(Self { factors, data: self.data.clone() })
    }

    pub fn rename(&self, old: &str, new: &str) -> HResult<Self> {
        let p = self.position(old)?;
        let mut factors = self.factors.clone();
        factors[p].name = new.to_string();
        check_factors(&factors)?;
        Ok(Self { factors, data: self.data.clone() })
    }

    /// Apply a linear map `op: dim(on) -> prod(outputs)` to factor `on`,
    /// replacing it in place by the output factors.
    ///
    /// No isometry check; the caller owns normalization.
    pub fn apply_operator(&self, on: &str, op: &CMat<T>, outputs: &[SystemLabel]) -> HResult<Self> {
        let p = self.position(on)?;
        let d_in = self.factors[p].dim;
        let d_out: usize = outputs.iter().map(|f| f.dim).product();
        if op.ncols() != d_in || op.nrows() != d_out {
            return Err(HilbertError::DimensionMismatch(format!(
                "operator is {}x{} but {on} has dimension {d_in} and outputs multiply to {d_out}",
                op.nrows(),
                op.ncols()
            )));
        }
        let mut factors = self.factors[..p].to_vec();
        factors.extend(outputs.iter().cloned());
        factors.extend(self.factors[p + 1..].iter().cloned());
        check_factors(&factors)?;
        let left: usize = self.factors[..p].iter().map(|f| f.dim).product();
        let right: usize = self.factors[p + 1..].iter().map(|f| f.dim).product();
        let data = match &self.data {
            StateData::Pure(v) => StateData::Pure(apply_local(op, v, left, d_in, right)),
            StateData::Mixed(m) => {
                // (I ⊗ op ⊗ I) m (I ⊗ op ⊗ I)^dagger, one column at a time
                let n_in = m.nrows();
                let n_out = left * d_out * right;
                let mut half = CMat::zeros(n_out, n_in);
                for j in 0..n_in {
                    let col = m.column(j).into_owned();
                    half.set_column(j, &apply_local(op, &col, left, d_in, right));
                }
                let half_adj = half.adjoint();
                let mut full = CMat::zeros(n_out, n_out);
                for j in 0..n_out {
                    let col = half_adj.column(j).into_owned();
                    full.set_column(j, &apply_local(op, &col, left, d_in, right));
                }
                // columns of (A m)^dagger = m A^dagger, so this is A m A^dagger
                StateData::Mixed(full)
            }
        };
        Ok(Self { factors, data })
    }

    /// Pure state on the current factors plus `reference` whose marginal is
    /// this state.
    pub fn purify(&self, reference: SystemLabel) -> HResult<Self> {
        if self.factors.iter().any(|f| f.name == reference.name) {
            return Err(HilbertError::NameCollision(reference.name));
        }
        match &self.data {
            StateData::Pure(v) => {
                let mut r = CVec::zeros(reference.dim);
                r[0] = cr(T::one());
                let mut factors = self.factors.clone();
                factors.push(reference);
                check_factors(&factors)?;
                Ok(Self { factors, data: StateData::Pure(linalg::kron_vec(v, &r)) })
            }
            StateData::Mixed(m) => {
                let (mut vals, vecs) = linalg::eigh(m);
                linalg::clip_spectrum(&mut vals);
                let cut = crate::scalar::clip::<T>();
                let rank = vals.iter().filter(|&&x| x > cut).count();
                if reference.dim < rank {
                    return Err(HilbertError::ReferenceTooSmall { given: reference.dim, rank });
                }
                let d = m.nrows();
                let dr = reference.dim;
                let mut out = CVec::zeros(d * dr);
                for (k, &lam) in vals.iter().enumerate().take(rank) {
                    let amp = lam.max(T::zero()).sqrt();
                    for i in 0..d {
                        out[i * dr + k] += vecs[(i, k)] * cr(amp);
                    }
                }
                let mut factors = self.factors.clone();
                factors.push(reference);
                check_factors(&factors)?;
                Ok(Self { factors, data: StateData::Pure(out) })
            }
        }
    }

    /// Multiply the data by a scalar (amplitude for pure, weight for mixed).
    pub(crate) fn scaled(&self, s: T) -> Self {
        let data = match &self.data {
            StateData::Pure(v) => StateData::Pure(v * cr(s)),
            StateData::Mixed(m) => StateData::Mixed(m * cr(s)),
        };
        Self { factors: self.factors.clone(), data }
    }

    /// Normalized copy (trace one); `None` for a zero state.
    pub fn normalized(&self) -> Option<Self> {
        let tr = self.trace();
        if tr <= T::zero() {
            return None;
        }
        Some(match &self.data {
            StateData::Pure(_) => self.scaled(T::one() / tr.sqrt()),
            StateData::Mixed(_) => self.scaled(T::one() / tr),
        })
    }
}

/// `(I_left ⊗ op ⊗ I_right) v` for a vector in row-major layout.
fn apply_local<T: Real>(op: &CMat<T>, v: &CVec<T>, left: usize, d_in: usize, right: usize) -> CVec<T> {
    let d_out = op.nrows();
    let mut out = CVec::zeros(left * d_out * right);
    let mut block = CMat::<T>::zeros(d_in, right);
    for l in 0..left {
        for i in 0..d_in {
            for r in 0..right {
                block[(i, r)] = v[(l * d_in + i) * right + r];
            }
        }
        let res = op * &block;
        for o in 0..d_out {
            for r in 0..right {
                out[(l * d_out + o) * right + r] = res[(o, r)];
            }
        }
    }
    out
}
