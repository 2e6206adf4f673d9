use nalgebra::Complex;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::linalg::CMat;
use crate::rng::{self, Rng};
use crate::scalar::{cr, modulus, Real};

/// Matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn complex_gaussian<T: Real>(rows: usize, cols: usize, rng: &mut Rng) -> CMat<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // column-major fill keeps the draw order fixed for a given shape
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re * s), T::lit(im * s))
    })
}

/// Orthonormalize Gaussian columns with QR, then rotate each column by the
/// phase of the matching diagonal entry of R so the result is exactly Haar.
fn qr_haar<T: Real>(g: CMat<T>) -> CMat<T> {
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let n = modulus(d);
        let phase = if n > T::zero() { d / cr(n) } else { cr(T::one()) };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random unitary drawn from stream 0 of `seed`.
pub fn haar_unitary<T: Real>(dim: usize, seed: u64) -> CMat<T> {
    haar_unitary_with(dim, &mut rng::stream(seed, 0))
}

pub fn haar_unitary_with<T: Real>(dim: usize, rng: &mut Rng) -> CMat<T> {
    qr_haar(complex_gaussian(dim, dim, rng))
}

/// Haar-random isometry `d_in -> d_out` (`d_out >= d_in`), distributed as the
/// first `d_in` columns of a Haar unitary.
pub fn haar_isometry_matrix<T: Real>(d_in: usize, d_out: usize, rng: &mut Rng) -> CMat<T> {
    assert!(d_out >= d_in, "isometry needs d_out >= d_in");
    qr_haar(complex_gaussian(d_out, d_in, rng))
}
