use super::linalg::{self, CMat};
use super::{HilbertError, MultipartiteState, StateData};
use crate::scalar::{modulus, modulus2, Real};

fn same_dims<T: Real>(a: &MultipartiteState<T>, b: &MultipartiteState<T>) -> Result<(), HilbertError> {
    if a.dims() != b.dims() {
        return Err(HilbertError::DimensionMismatch(format!(
            "states have dimensions {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Unhalved trace norm `||rho - sigma||_1`, in `[0, 2]` for normalized states.
///
/// Factor names are not compared, only the dimension lists.
pub fn trace_distance<T: Real>(
    rho: &MultipartiteState<T>,
    sigma: &MultipartiteState<T>,
) -> Result<T, HilbertError> {
    same_dims(rho, sigma)?;
    if let (StateData::Pure(a), StateData::Pure(b)) = (rho.data(), sigma.data()) {
        // rank-two difference of unit vectors: 2 sqrt(1 - |<a|b>|^2)
        let na = a.norm_squared();
        let nb = b.norm_squared();
        let tol = crate::scalar::tol::<T>();
        if (na - T::one()).abs() < tol && (nb - T::one()).abs() < tol {
            let ov = modulus2(a.dotc(b));
            let two = T::lit(2.0);
            return Ok(two * (T::one() - ov).max(T::zero()).sqrt());
        }
    }
    Ok(trace_distance_matrices(&rho.density_matrix(), &sigma.density_matrix()))
}

pub fn trace_distance_matrices<T: Real>(rho: &CMat<T>, sigma: &CMat<T>) -> T {
    linalg::trace_norm_herm(&(rho - sigma))
}

/// Root fidelity `F = ||sqrt(rho) sqrt(sigma)||_1`.
pub fn fidelity<T: Real>(
    rho: &MultipartiteState<T>,
    sigma: &MultipartiteState<T>,
) -> Result<T, HilbertError> {
    same_dims(rho, sigma)?;
    Ok(match (rho.data(), sigma.data()) {
        (StateData::Pure(a), StateData::Pure(b)) => modulus(a.dotc(b)),
        (StateData::Pure(a), StateData::Mixed(s)) | (StateData::Mixed(s), StateData::Pure(a)) => {
            (a.adjoint() * s * a)[(0, 0)].re.max(T::zero()).sqrt()
        }
        (StateData::Mixed(r), StateData::Mixed(s)) => fidelity_matrices(r, s),
    })
}

/// Sum of singular values of `sqrt(rho) sqrt(sigma)`; avoids the square
/// roots of near-zero eigenvalues of `sqrt(rho) sigma sqrt(rho)`.
pub fn fidelity_matrices<T: Real>(rho: &CMat<T>, sigma: &CMat<T>) -> T {
    let prod = linalg::psd_sqrt(rho) * linalg::psd_sqrt(sigma);
    prod.singular_values().iter().fold(T::zero(), |acc, &x| acc + x)
}
