//! Named tripartite pure states on systems `A`, `B`, `R`.

use nalgebra::Complex;

use super::haar::complex_gaussian;
use super::linalg::CVec;
use super::state::{label, MultipartiteState};
use super::HilbertError;
use crate::rng;

/// Names accepted by [`builtin_state`] without parameters.
pub const BUILTIN_SUITE: &[&str] = &["bell-ab", "bell-ar", "ghz", "w", "product", "partial"];

type S = MultipartiteState<f64>;

fn ket(name: &str, d: usize, i: usize) -> Result<S, HilbertError> {
    S::basis(vec![label(name, d)], i)
}

fn abr(amps: &[(usize, f64)]) -> Result<S, HilbertError> {
    let mut v = CVec::<f64>::zeros(8);
    for &(i, a) in amps {
        v[i] = Complex::new(a, 0.0);
    }
    let n = v.norm();
    S::pure(vec![label("A", 2), label("B", 2), label("R", 2)], v / Complex::new(n, 0.0))
}

/// Haar-random pure state on `A ⊗ B ⊗ R` from stream 1 of `seed`.
pub fn random_tripartite(d_a: usize, d_b: usize, d_r: usize, seed: u64) -> Result<S, HilbertError> {
    let d = d_a
        .checked_mul(d_b)
        .and_then(|x| x.checked_mul(d_r))
        .filter(|&d| d > 0 && d <= super::MAX_DIM)
        .ok_or_else(|| HilbertError::InvalidState(format!("dimensions {d_a}x{d_b}x{d_r} out of range")))?;
    let g = complex_gaussian::<f64>(d, 1, &mut rng::stream(seed, 1));
    let v: CVec<f64> = g.column(0).into_owned();
    let n = v.norm();
    S::pure(vec![label("A", d_a), label("B", d_b), label("R", d_r)], v / Complex::new(n, 0.0))
}

/// `bell-ab`, `bell-ar`, `ghz`, `w`, `product`, `partial` (A half-entangled with
/// both B and R), or `random(dA,dB,dR,seed)`.
pub fn builtin_state(spec: &str) -> Result<S, HilbertError> {
    let bad = || HilbertError::InvalidState(format!("unknown state {spec:?}"));
    match spec {
        "bell-ab" => S::max_entangled("A", "B", 2)?.tensor_with(&ket("R", 2, 0)?),
        "bell-ar" => S::max_entangled("A", "R", 2)?.tensor_with(&ket("B", 2, 0)?)?.reorder(&["A", "B", "R"]),
        "ghz" => S::ghz(&["A", "B", "R"]),
        "w" => abr(&[(1, 1.0), (2, 1.0), (4, 1.0)]),
        "product" => abr(&[(0, 1.0)]),
        // |000> + |110> + |101> with unequal weights: mixed A, correlated with both sides
        "partial" => abr(&[(0, 0.8), (6, 0.5), (5, 0.33)]),
        _ => {
            let args = spec.strip_prefix("random(").and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
            let nums: Vec<u64> = args
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            match nums[..] {
                [a, b, r, seed] => random_tripartite(a as usize, b as usize, r as usize, seed),
                _ => Err(bad()),
            }
        }
    }
}
