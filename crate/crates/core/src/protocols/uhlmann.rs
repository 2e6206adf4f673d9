use super::{PResult, ProtocolError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::MultipartiteState;
use crate::scalar::{clip, Real};

#[derive(Debug, Clone)]
pub struct UhlmannResult<T: Real> {
    /// `|Y| x |X|`; an isometry when `|Y| >= |X|`, otherwise isometric on the
    /// support of the first state's `X` marginal.
    pub isometry: CMat<T>,
    /// `|<φ2| (W ⊗ 1) |φ1>|`, which equals `F(ρ_R^{(1)}, ρ_R^{(2)})`.
    pub overlap: T,
}

/// Uhlmann decoder between coefficient matrices `m1: X x R` and `m2: Y x R`.
///
/// The maximizer of `|Tr(m2^† W m1)|` is the polar part of `m2 m1^†`.
pub fn uhlmann_matrices<T: Real>(m1: &CMat<T>, m2: &CMat<T>) -> PResult<UhlmannResult<T>> {
    if m1.ncols() != m2.ncols() {
        return Err(ProtocolError::ReferenceMismatch(format!(
            "reference dimensions {} and {}",
            m1.ncols(),
            m2.ncols()
        )));
    }
    if m2.nrows() < m1.nrows() {
        let rank = linalg::numerical_rank(&(m1 * m1.adjoint()), clip::<T>());
        if m2.nrows() < rank {
            return Err(ProtocolError::TargetTooSmall { y: m2.nrows(), rank });
        }
    }
    let (isometry, overlap) = linalg::polar(&(m2 * m1.adjoint()));
    Ok(UhlmannResult { isometry, overlap })
}

/// Coefficient matrix of a pure state with rows indexed by `x` (in order)
/// and columns by the remaining factors (in their original order).
fn split_matrix<T: Real>(psi: &MultipartiteState<T>, x: &[&str]) -> PResult<(CMat<T>, Vec<(String, usize)>)> {
    let rest: Vec<&str> = psi.names().into_iter().filter(|n| !x.contains(n)).collect();
    let order: Vec<&str> = x.iter().copied().chain(rest.iter().copied()).collect();
    let v = psi.reorder(&order)?;
    let vec = v.vector().ok_or(ProtocolError::NotPure)?;
    let dx = psi.dim_of(x)?;
    let dr = vec.len() / dx;
    let m = CMat::from_fn(dx, dr, |i, j| vec[i * dr + j]);
    let refs = rest.iter().map(|n| (n.to_string(), psi.label(n).map(|l| l.dim).unwrap_or(0))).collect();
    Ok((m, refs))
}

/// Isometry `X -> Y` taking `phi1` as close as possible to `phi2`, where both
/// states share every factor outside `X` and `Y` respectively.
pub fn uhlmann_isometry<T: Real>(
    phi1: &MultipartiteState<T>,
    x: &[&str],
    phi2: &MultipartiteState<T>,
    y: &[&str],
) -> PResult<UhlmannResult<T>> {
    let (m1, r1) = split_matrix(phi1, x)?;
    let (m2, r2) = split_matrix(phi2, y)?;
    if r1 != r2 {
        return Err(ProtocolError::ReferenceMismatch(format!("{r1:?} vs {r2:?}")));
    }
    uhlmann_matrices(&m1, &m2)
}
