use super::{CResult, ChannelError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::QuantumChannel;
use crate::scalar::{cr, tol, Real};

/// Decoder `B -> Ã ⊗ E' ⊗ P` for one subspace and its entanglement fidelity.
#[derive(Debug, Clone)]
pub struct SubspaceDecoder<T: Real> {
    /// Isometry of shape `(k * d_E * pad) x d_B`, output index `(a, e', p)`.
    pub isometry: CMat<T>,
    pub k: usize,
    pub env_copy_dim: usize,
    /// Padding dimension making the decoder an isometry when `k d_E < d_B`.
    pub pad: usize,
    /// `<Φ_k| (D ∘ N ⊗ id)(Φ_k) |Φ_k>` with `E'` and `P` traced out.
    pub fidelity: T,
    /// Uhlmann overlap `F(rho_RE, π_R ⊗ rho_E)` achieved before tracing `E'`.
    pub overlap: T,
}

fn check_basis<T: Real>(basis: &CMat<T>, d: usize) -> CResult<()> {
    if basis.nrows() != d {
        return Err(crate::hilbert::HilbertError::DimensionMismatch(format!(
            "basis vectors have length {} but the channel input is {d}",
            basis.nrows()
        ))
        .into());
    }
    if basis.ncols() > d {
        return Err(ChannelError::SubspaceTooLarge { k: basis.ncols(), d });
    }
    let defect = linalg::isometry_defect(basis).as_f64();
    if defect > 1e-8 {
        return Err(ChannelError::NotOrthonormal(defect));
    }
    Ok(())
}

/// Uhlmann decoder for the subspace spanned by the columns of `basis`.
///
/// The test state is the maximally entangled state between the subspace and
/// a reference `R` of dimension `k`. The decoder is the polar part of the
/// overlap between the channel output and the target
/// `Φ_{ÃR} ⊗ |sqrt(rho_E)>_{EE'}`, where `rho_E` is the actual environment
/// marginal.
pub fn decode_subspace<T: Real>(ch: &QuantumChannel<T>, basis: &CMat<T>) -> CResult<SubspaceDecoder<T>> {
    let d_a = ch.input_dim();
    check_basis(basis, d_a)?;
    let k = basis.ncols();
    if k == 0 {
        return Err(ChannelError::SubspaceTooLarge { k, d: d_a });
    }
    let (d_b, d_e) = (ch.output().dim, ch.environment().dim);
    let inv_sqrt_k = T::one() / T::from_usize(k).unwrap().sqrt();
    // phi[(b, e), r] = (V W)[(b e), r] / sqrt(k)
    let phi = (ch.isometry() * basis) * cr(inv_sqrt_k);
    // X: d_B x (d_E k), column index (e, r)
    let x = CMat::from_fn(d_b, d_e * k, |b, c| phi[(b * d_e + c / k, c % k)]);
    let rho_e = CMat::from_fn(d_e, d_e, |e, f| {
        let mut acc = cr(T::zero());
        for b in 0..d_b {
            for r in 0..k {
                acc += phi[(b * d_e + e, r)] * phi[(b * d_e + f, r)].conj();
            }
        }
        acc
    });
    let sq = linalg::psd_sqrt(&rho_e);
    let pad = d_b.div_ceil(k * d_e);
    let d_y = k * d_e * pad;
    // target: rows (a, f, p), columns (e, r); nonzero only for p = 0, a = r
    let mut y = CMat::<T>::zeros(d_y, d_e * k);
    for a in 0..k {
        for f in 0..d_e {
            for e in 0..d_e {
                y[((a * d_e + f) * pad, e * k + a)] = sq[(e, f)] * cr(inv_sqrt_k);
            }
        }
    }
    let m = &y * x.adjoint();
    let (w, overlap) = linalg::polar(&m);
    debug_assert!(linalg::isometry_defect(&w) < tol::<T>() * T::lit(1e4));
    let out = &w * &x;
    // rho_ÃR[(a, r), (a', r')] = sum_{f,p,e} out[(a,f,p),(e,r)] conj(out[(a',f,p),(e,r')])
    // only its diagonal-in-(a=r) block matters for <Φ|rho|Φ>
    let mut fid = cr(T::zero());
    for a in 0..k {
        for a2 in 0..k {
            let mut acc = cr(T::zero());
            for f in 0..d_e {
                for p in 0..pad {
                    for e in 0..d_e {
                        acc += out[((a * d_e + f) * pad + p, e * k + a)]
                            * out[((a2 * d_e + f) * pad + p, e * k + a2)].conj();
                    }
                }
            }
            fid += acc;
        }
    }
    let fidelity = fid.re / T::from_usize(k).unwrap();
    Ok(SubspaceDecoder { isometry: w, k, env_copy_dim: d_e, pad, fidelity, overlap })
}
