//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar the linear-algebra kernels are generic over.
///
/// The tolerance constants scale the documented `1e-10` checks down to what
/// the type can actually resolve.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Tolerance for normalization, hermiticity and isometry checks.
    const STATE_TOL: f64;
    /// Eigenvalues in `(-EIG_CLIP, 0)` are clipped to zero.
    const EIG_CLIP: f64;
    /// Target bracket width, in bits, for iterative entropy solvers.
    const SOLVER_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f64 {
    const STATE_TOL: f64 = 1e-10;
    const EIG_CLIP: f64 = 1e-10;
    const SOLVER_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const STATE_TOL: f64 = 1e-4;
    const EIG_CLIP: f64 = 1e-5;
    const SOLVER_TOL: f64 = 1e-3;
}

pub type C<T> = Complex<T>;

pub(crate) fn tol<T: Real>() -> T {
    T::lit(T::STATE_TOL)
}

pub(crate) fn clip<T: Real>() -> T {
    T::lit(T::EIG_CLIP)
}

pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `|z|`, without requiring `num_traits::Float` on the real type.
pub fn modulus<T: Real>(z: C<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

pub fn modulus2<T: Real>(z: C<T>) -> T {
    z.re * z.re + z.im * z.im
}
