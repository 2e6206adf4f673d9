//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::scalar::{clip, cr, modulus, Real};

pub type CMat<T> = DMatrix<Complex<T>>;
pub type CVec<T> = DVector<Complex<T>>;

pub fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    let half = T::lit(0.5);
    (m + m.adjoint()).map(|z| z * half)
}

/// Hermitian eigendecomposition, eigenvalues in descending order.
///
/// Eigenvector phases are fixed so the first component with modulus above
/// `1e-8` is real and positive.
pub fn eigh<T: Real>(m: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    let cut = T::lit(1e-8);
    for (j, &i) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        if let Some(lead) = col.iter().find(|z| modulus(**z) > cut).copied() {
            let phase = lead.conj() / cr(modulus(lead));
            col *= phase;
        }
        vectors.set_column(j, &col);
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let vals = hermitize(m).symmetric_eigenvalues();
    let mut v: Vec<T> = vals.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Clip eigenvalues in `(-EIG_CLIP, 0)` to zero; larger negatives are kept.
pub fn clip_spectrum<T: Real>(values: &mut [T]) {
    let c = clip::<T>();
    for v in values.iter_mut() {
        if *v < T::zero() && *v > -c {
            *v = T::zero();
        }
    }
}

/// Apply a scalar function to the spectrum of a Hermitian matrix.
pub fn herm_fn<T: Real>(m: &CMat<T>, f: impl Fn(T) -> T) -> CMat<T> {
    let (vals, vecs) = eigh(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let fj = cr(f(vals[j]));
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vecs.adjoint()
}

/// Principal square root of a PSD matrix, negative eigenvalues set to zero.
pub fn psd_sqrt<T: Real>(m: &CMat<T>) -> CMat<T> {
    herm_fn(m, |x| if x > T::zero() { x.sqrt() } else { T::zero() })
}

/// Schatten 1-norm of a Hermitian matrix.
pub fn trace_norm_herm<T: Real>(m: &CMat<T>) -> T {
    eigvalsh(m).into_iter().fold(T::zero(), |acc, x| acc + x.abs())
}

pub fn trace<T: Real>(m: &CMat<T>) -> Complex<T> {
    m.diagonal().iter().fold(cr(T::zero()), |acc, &z| acc + z)
}

pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

pub fn kron_vec<T: Real>(a: &CVec<T>, b: &CVec<T>) -> CVec<T> {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

/// `max |V^dagger V - I|` entrywise.
pub fn isometry_defect<T: Real>(v: &CMat<T>) -> T {
    let g = v.adjoint() * v;
    let n = g.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { cr(T::one()) } else { cr(T::zero()) };
            let d = modulus(g[(i, j)] - target);
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Max entrywise deviation from hermiticity.
pub fn hermiticity_defect<T: Real>(m: &CMat<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = modulus(m[(i, j)] - m[(j, i)].conj());
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Outer product `|a><b|`.
pub fn outer<T: Real>(a: &CVec<T>, b: &CVec<T>) -> CMat<T> {
    a * b.adjoint()
}

/// Number of eigenvalues above `cut`.
pub fn numerical_rank<T: Real>(m: &CMat<T>, cut: T) -> usize {
    eigvalsh(m).into_iter().filter(|&x| x > cut).count()
}

/// Polar part `U V^dagger` of `m = U S V^dagger` and the nuclear norm `sum S`.
///
/// For `m` with at least as many rows as columns the polar part is an
/// isometry; otherwise it is a co-isometry.
pub fn polar<T: Real>(m: &CMat<T>) -> (CMat<T>, T) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let nuclear = svd.singular_values.iter().fold(T::zero(), |acc, &x| acc + x);
    (u * v_t, nuclear)
}

/// Row-major multi-index strides for a list of dimensions.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// For a permutation `perm` (new position `j` holds old factor `perm[j]`),
/// the map from old flat index to new flat index.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let new_strides = strides(&new_dims);
    // stride in the new layout for each old factor
    let mut old_to_new_stride = vec![0usize; dims.len()];
    for (j, &k) in perm.iter().enumerate() {
        old_to_new_stride[k] = new_strides[j];
    }
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    let mut idx = 0usize;
    for _ in 0..total {
        map.push(idx);
        // odometer increment over the old layout, last factor fastest
        for k in (0..dims.len()).rev() {
            digits[k] += 1;
            idx += old_to_new_stride[k];
            if digits[k] < dims[k] {
                break;
            }
            idx -= old_to_new_stride[k] * dims[k];
            digits[k] = 0;
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_map_swaps_two_factors() {
        // dims [2,3]: old index a*3+b -> new index b*2+a
        let map = permutation_map(&[2, 3], &[1, 0]);
        for a in 0..2 {
            for b in 0..3 {
                assert_eq!(map[a * 3 + b], b * 2 + a);
            }
        }
    }

    #[test]
    fn eigh_orders_descending_and_reconstructs() {
        let m = CMat::<f64>::from_row_slice(
            2,
            2,
            &[
                Complex::new(0.3, 0.0),
                Complex::new(0.1, 0.2),
                Complex::new(0.1, -0.2),
                Complex::new(0.7, 0.0),
            ],
        );
        let (vals, vecs) = eigh(&m);
        assert!(vals[0] >= vals[1]);
        let d = CMat::from_diagonal(&DVector::from_iterator(2, vals.iter().map(|&x| cr(x))));
        let back = &vecs * d * vecs.adjoint();
        assert!((back - m).norm() < 1e-12);
    }

    #[test]
    fn clip_only_touches_tiny_negatives() {
        let mut v = vec![1.0, -1e-12, -1e-3];
        clip_spectrum(&mut v);
        assert_eq!(v, vec![1.0, 0.0, -1e-3]);
    }
}
