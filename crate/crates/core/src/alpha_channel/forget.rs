use super::{CResult, ChannelError};
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::{complex_gaussian, QuantumChannel};
use crate::rng::{self, Rng};
use crate::scalar::{cr, Real};

pub const DEFAULT_SAMPLES: usize = 200;

/// Number of best starting points refined by local ascent at each level.
const RESTARTS: usize = 4;
const ASCENT_STEPS: usize = 60;

/// Sampled lower bound on `||N^c - R_ω||_⋄^{(k)}`.
#[derive(Debug, Clone)]
pub struct ForgetfulnessEstimate<T: Real> {
    pub k: usize,
    pub lower_bound: T,
    pub samples: usize,
    /// Replacement target `ω = N^c(I/d_A)`.
    pub fixed_state: CMat<T>,
    /// Best input found, as a `d_A x k` coefficient matrix `|ψ> = Σ G[a,r] |a>|r>`.
    pub best_input: CMat<T>,
}

/// Environment output of `V` on `I/d_A`.
pub(super) fn replacement_target<T: Real>(ch: &QuantumChannel<T>) -> CMat<T> {
    let d = ch.input_dim();
    ch.environment_matrix(&(linalg::identity::<T>(d) * cr(T::one() / T::from_usize(d).unwrap())))
}

/// `||(N^c ⊗ id)(ψ) - ω ⊗ ψ_R||_1` for `|ψ> = Σ G[a,r] |a>|r>`, `||G||_F = 1`.
///
/// With `omega = None` the product reference uses the state's own `ρ_E`.
pub(super) fn distinguishability<T: Real>(ch: &QuantumChannel<T>, omega: Option<&CMat<T>>, g: &CMat<T>) -> T {
    let (d_b, d_e, k) = (ch.output().dim, ch.environment().dim, g.ncols());
    let x = ch.isometry() * g;
    let mut rho_er = CMat::<T>::zeros(d_e * k, d_e * k);
    for e in 0..d_e {
        for r in 0..k {
            for e2 in 0..d_e {
                for r2 in 0..k {
                    let mut acc = cr(T::zero());
                    for b in 0..d_b {
                        acc += x[(b * d_e + e, r)] * x[(b * d_e + e2, r2)].conj();
                    }
                    rho_er[(e * k + r, e2 * k + r2)] = acc;
                }
            }
        }
    }
    let rho_r = g.transpose() * g.map(|z| z.conj());
    let own;
    let omega = match omega {
        Some(w) => w,
        None => {
            own = CMat::from_fn(d_e, d_e, |e, e2| (0..k).fold(cr(T::zero()), |acc, r| acc + rho_er[(e * k + r, e2 * k + r)]));
            &own
        }
    };
    let diff = rho_er - linalg::kron(omega, &rho_r);
    linalg::trace_norm_herm(&diff)
}

fn normalized<T: Real>(mut g: CMat<T>) -> CMat<T> {
    let n = g.norm();
    g /= cr(n);
    g
}

/// Random-direction hill climb with an adaptive step.
fn ascend<T: Real>(ch: &QuantumChannel<T>, omega: &CMat<T>, start: CMat<T>, value: T, rng: &mut Rng) -> (CMat<T>, T) {
    let (mut g, mut best) = (start, value);
    let scale = T::one() / T::from_usize(g.len()).unwrap().sqrt();
    let mut step = T::lit(0.3);
    for _ in 0..ASCENT_STEPS {
        if step < T::lit(1e-4) {
            break;
        }
        let dir = complex_gaussian::<T>(g.nrows(), g.ncols(), rng);
        let trial = normalized(&g + dir * cr(step * scale));
        let v = distinguishability(ch, Some(omega), &trial);
        if v > best {
            g = trial;
            best = v;
            step *= T::lit(1.2);
        } else {
            step *= T::lit(0.7);
        }
    }
    (g, best)
}

/// Best input of Schmidt rank at most `k`, seeded from `carry` and `extra`.
pub(super) fn optimize_level<T: Real>(
    ch: &QuantumChannel<T>,
    omega: &CMat<T>,
    k: usize,
    samples: usize,
    carry: Option<&CMat<T>>,
    extra: &[CMat<T>],
    rng: &mut Rng,
) -> (CMat<T>, T) {
    let d = ch.input_dim();
    let mut cands: Vec<CMat<T>> = Vec::with_capacity(samples + extra.len() + 2);
    if let Some(prev) = carry {
        // a rank-(k-1) input is also a rank-k input: pad with a zero column
        let mut g = CMat::<T>::zeros(d, k);
        g.view_mut((0, 0), (d, prev.ncols())).copy_from(prev);
        cands.push(g);
    }
    // maximally entangled on the first k basis vectors
    let mut me = CMat::<T>::zeros(d, k);
    for i in 0..k {
        me[(i, i)] = cr(T::one() / T::from_usize(k).unwrap().sqrt());
    }
    cands.push(me);
    cands.extend(extra.iter().cloned());
    for _ in 0..samples {
        cands.push(normalized(complex_gaussian(d, k, rng)));
    }
    let mut scored: Vec<(T, CMat<T>)> =
        cands.into_iter().map(|g| (distinguishability(ch, Some(omega), &g), g)).collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = (scored[0].1.clone(), scored[0].0);
    for (v, g) in scored.into_iter().take(RESTARTS) {
        let (g2, v2) = ascend(ch, omega, g, v, rng);
        if v2 > best.1 {
            best = (g2, v2);
        }
    }
    best
}

pub(super) fn chained<T: Real>(
    ch: &QuantumChannel<T>,
    k: usize,
    samples: usize,
    seed: u64,
    extra: &[CMat<T>],
) -> CResult<ForgetfulnessEstimate<T>> {
    let d = ch.input_dim();
    if k > d || k == 0 {
        return Err(ChannelError::SubspaceTooLarge { k, d });
    }
    let omega = replacement_target(ch);
    let mut carry: Option<CMat<T>> = None;
    let mut value = T::zero();
    for level in 1..=k {
        let mut rng = rng::stream(seed, level as u64);
        let extra_here: &[CMat<T>] = if level == k { extra } else { &[] };
        let (g, v) = optimize_level(ch, &omega, level, samples, carry.as_ref(), extra_here, &mut rng);
        // the carried input keeps the running maximum, so levels never decrease
        value = if v > value { v } else { value };
        carry = Some(g);
    }
    let two = T::lit(2.0);
    Ok(ForgetfulnessEstimate {
        k,
        lower_bound: if value > two { two } else { value },
        samples,
        fixed_state: omega,
        best_input: carry.expect("k >= 1"),
    })
}

/// Lower bound on the `k`-restricted diamond distance between the
/// complementary channel and the replacement channel onto `N^c(I/d_A)`.
///
/// Level `j = 1..=k` optimizes over inputs of Schmidt rank `j` from `samples`
/// random starts, the maximally entangled state on the first `j` basis
/// vectors and the previous level's optimum, followed by local ascent. Each
/// level draws from stream `j` of `seed`, so the estimate for `k` extends the
/// estimate for `k - 1` and is non-decreasing in `k`.
pub fn forgetfulness_deficit<T: Real>(
    ch: &QuantumChannel<T>,
    k: usize,
    samples: usize,
    seed: u64,
) -> CResult<ForgetfulnessEstimate<T>> {
    chained(ch, k, samples, seed, &[])
}
