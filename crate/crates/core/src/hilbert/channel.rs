use super::linalg::{self, CMat, CVec};
use super::{haar, HilbertError, MultipartiteState, SystemLabel, MAX_DIM};
use crate::rng;
use crate::scalar::{cr, tol, Real};

type HResult<T> = Result<T, HilbertError>;

/// Channel stored as a Stinespring isometry `V: in -> B ⊗ E`.
///
/// Rows of `V` are indexed `b * d_E + e`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel<T: Real> {
    isometry: CMat<T>,
    output: SystemLabel,
    environment: SystemLabel,
}

impl<T: Real> QuantumChannel<T> {
    pub fn from_isometry(
        isometry: CMat<T>,
        output: SystemLabel,
        environment: SystemLabel,
    ) -> HResult<Self> {
        if output.name == environment.name {
            return Err(HilbertError::NameCollision(output.name));
        }
        let d_out = output.dim * environment.dim;
        if isometry.nrows() != d_out {
            return Err(HilbertError::DimensionMismatch(format!(
                "isometry has {} rows but d_B * d_E = {d_out}",
                isometry.nrows()
            )));
        }
        if isometry.ncols() > d_out {
            return Err(HilbertError::OutputTooSmall { d_in: isometry.ncols(), d_out });
        }
        if d_out > MAX_DIM {
            return Err(HilbertError::TooLarge(d_out));
        }
        let defect = linalg::isometry_defect(&isometry);
        if defect > tol::<T>() {
            return Err(HilbertError::NotIsometry(defect.as_f64()));
        }
        Ok(Self { isometry, output, environment })
    }

    /// Identity channel with a one-dimensional environment.
    pub fn identity(d: usize, output: &str, environment: &str) -> HResult<Self> {
        Self::from_isometry(
            linalg::identity(d),
            SystemLabel::new(output, d)?,
            SystemLabel::new(environment, 1)?,
        )
    }

    /// Haar-random isometry from `d_in` into `output ⊗ environment`.
    pub fn haar(d_in: usize, output: SystemLabel, environment: SystemLabel, seed: u64) -> HResult<Self> {
        let d_out = output.dim * environment.dim;
        if d_out < d_in {
            return Err(HilbertError::OutputTooSmall { d_in, d_out });
        }
        if d_in == 0 {
            return Err(HilbertError::DimensionMismatch("input dimension must be positive".into()));
        }
        let v = haar::haar_isometry_matrix(d_in, d_out, &mut rng::stream(seed, 0));
        Self::from_isometry(v, output, environment)
    }

    /// Replacement channel: every input is replaced by `fixed` on B and the
    /// input itself is moved to the environment (`d_E = d_in`).
    pub fn replacement(fixed: &CVec<T>, output: &str, environment: &str) -> HResult<Self> {
        let d_b = fixed.len();
        let n = fixed.norm();
        if (n - T::one()).abs() > tol::<T>() {
            return Err(HilbertError::InvalidState(format!("replacement state has norm {n}")));
        }
        Self::replacement_with_input(fixed, d_b, output, environment)
    }

    fn replacement_with_input(fixed: &CVec<T>, d_in: usize, output: &str, environment: &str) -> HResult<Self> {
        let d_b = fixed.len();
        let mut v = CMat::zeros(d_b * d_in, d_in);
        for i in 0..d_in {
            for b in 0..d_b {
                v[(b * d_in + i, i)] = fixed[b];
            }
        }
        Self::from_isometry(v, SystemLabel::new(output, d_b)?, SystemLabel::new(environment, d_in)?)
    }

    /// Replacement channel with input dimension `d_in` independent of `d_B`.
    pub fn replacement_from(d_in: usize, fixed: &CVec<T>, output: &str, environment: &str) -> HResult<Self> {
        Self::replacement_with_input(fixed, d_in, output, environment)
    }

    pub fn isometry(&self) -> &CMat<T> {
        &self.isometry
    }

    pub fn output(&self) -> &SystemLabel {
        &self.output
    }

    pub fn environment(&self) -> &SystemLabel {
        &self.environment
    }

    pub fn input_dim(&self) -> usize {
        self.isometry.ncols()
    }

    /// Same dilation read with the roles of B and E swapped.
    pub fn complementary(&self) -> Self {
        let (db, de) = (self.output.dim, self.environment.dim);
        let mut v = CMat::zeros(db * de, self.input_dim());
        for b in 0..db {
            for e in 0..de {
                v.set_row(e * db + b, &self.isometry.row(b * de + e));
            }
        }
        Self { isometry: v, output: self.environment.clone(), environment: self.output.clone() }
    }

    /// Rename the output and environment systems.
    pub fn relabeled(&self, output: &str, environment: &str) -> HResult<Self> {
        if output == environment {
            return Err(HilbertError::NameCollision(output.to_string()));
        }
        let mut c = self.clone();
        c.output.name = output.to_string();
        c.environment.name = environment.to_string();
        Ok(c)
    }

    /// Dilated action on factor `on`: the factor is replaced by `B, E`.
    pub fn apply(&self, state: &MultipartiteState<T>, on: &str) -> HResult<MultipartiteState<T>> {
        let d = state.label(on)?.dim;
        if d != self.input_dim() {
            return Err(HilbertError::DimensionMismatch(format!(
                "channel input dimension {} but {on} has dimension {d}",
                self.input_dim()
            )));
        }
        state.apply_operator(on, &self.isometry, &[self.output.clone(), self.environment.clone()])
    }

    /// `N(rho)` on B for a density matrix on the input.
    pub fn output_matrix(&self, rho: &CMat<T>) -> CMat<T> {
        let full = &self.isometry * rho * self.isometry.adjoint();
        let (db, de) = (self.output.dim, self.environment.dim);
        CMat::from_fn(db, db, |i, j| {
            (0..de).fold(cr(T::zero()), |acc, e| acc + full[(i * de + e, j * de + e)])
        })
    }

    /// `N^c(rho)` on E for a density matrix on the input.
    pub fn environment_matrix(&self, rho: &CMat<T>) -> CMat<T> {
        let full = &self.isometry * rho * self.isometry.adjoint();
        let (db, de) = (self.output.dim, self.environment.dim);
        CMat::from_fn(de, de, |i, j| {
            (0..db).fold(cr(T::zero()), |acc, b| acc + full[(b * de + i, b * de + j)])
        })
    }
}
