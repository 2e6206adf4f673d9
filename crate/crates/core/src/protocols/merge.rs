use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::schumacher::schumacher_project;
use super::uhlmann::uhlmann_matrices;
use super::{PResult, ProtocolError, ProtocolPartition, ProtocolReport};
use crate::alpha_channel::{decode_subspace, AlphaDitSpec};
use crate::entropy::EntropyReport;
use crate::hilbert::linalg::{self, CMat};
use crate::hilbert::{haar_unitary_with, HilbertError, MultipartiteState, QuantumChannel, MAX_DIM};
use crate::rng;
use crate::scalar::{cr, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MergeOptions {
    /// Typicality slack of the Schumacher projection.
    pub delta: f64,
    /// Extra qubits sent on top of `⌈n I(A:R) / 2⌉` to absorb finite-n corrections.
    pub margin_qubits: usize,
}

impl Default for MergeOptions {
    fn default() -> Self {
        MergeOptions { delta: 0.5, margin_qubits: 1 }
    }
}

/// `⌈n I(A:R) / 2⌉ + margin`, or 0 when `A` and `R` are uncorrelated.
pub fn transmitted_qubits(mut_ar: f64, n: usize, margin: usize) -> usize {
    let q = 0.5 * n as f64 * mut_ar;
    if q <= 1e-9 {
        0
    } else {
        (q - 1e-9).ceil() as usize + margin
    }
}

/// `ψ^{⊗n}` as a `d_A^n x (d_B^n d_R^n)` matrix, rows `a_1..a_n`, columns
/// `(b_1..b_n, r_1..r_n)`.
struct Copies<T: Real> {
    psi: CMat<T>,
    da: usize,
    db: usize,
    dr: usize,
}

fn tensor_power<T: Real>(psi: &MultipartiteState<T>, n: usize) -> PResult<Copies<T>> {
    if n == 0 {
        return Err(ProtocolError::NoCopies);
    }
    if psi.factors().len() != 3 {
        return Err(crate::entropy::EntropyError::NotTripartite(psi.factors().len()).into());
    }
    let v = psi.vector().ok_or(ProtocolError::NotPure)?;
    let d = psi.dims();
    let (a1, b1, r1) = (d[0], d[1], d[2]);
    let t = a1 * b1 * r1;
    let total = (t as u128).pow(n as u32);
    if total > MAX_DIM as u128 {
        return Err(HilbertError::TooLarge(total.min(usize::MAX as u128) as usize).into());
    }
    let (da, db, dr) = (a1.pow(n as u32), b1.pow(n as u32), r1.pow(n as u32));
    let mut m = CMat::<T>::zeros(da, db * dr);
    for idx in 0..total as usize {
        let (mut rest, mut a, mut b, mut r) = (idx, 0, 0, 0);
        let mut amp = cr(T::one());
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            digits[i] = rest % t;
            rest /= t;
        }
        for &x in &digits {
            amp *= v[x];
            a = a * a1 + x / (b1 * r1);
            b = b * b1 + (x / r1) % b1;
            r = r * r1 + x % r1;
        }
        m[(a, b * dr + r)] = amp;
    }
    Ok(Copies { psi: m, da, db, dr })
}

/// Scrambled typical part of `A^n`: rows `(c, a')` of a `2^m`-dim register.
struct Scrambled<T: Real> {
    phi: CMat<T>,
    d_s: usize,
    log_d: usize,
    typical_dim: usize,
    typical_weight: f64,
}

fn scramble<T: Real>(
    psi: &MultipartiteState<T>,
    copies: &Copies<T>,
    n: usize,
    seed: u64,
    opts: &MergeOptions,
) -> PResult<Scrambled<T>> {
    let a_name = psi.names()[0].to_string();
    let proj = schumacher_project(psi, &a_name, n, opts.delta)?;
    let w = proj.isometry();
    let mut s = w.adjoint() * &copies.psi;
    let norm = s.norm();
    s /= cr(norm);
    let log_d = (usize::BITS - (proj.dim - 1).leading_zeros()) as usize;
    let log_d = if proj.dim <= 1 { 0 } else { log_d };
    let d_s = 1usize << log_d;
    let mut e = CMat::<T>::zeros(d_s, s.ncols());
    e.view_mut((0, 0), (s.nrows(), s.ncols())).copy_from(&s);
    let u: CMat<T> = haar_unitary_with(d_s, &mut rng::stream(seed, 0));
    Ok(Scrambled { phi: u * e, d_s, log_d, typical_dim: proj.dim, typical_weight: proj.weight })
}

/// `ψ_R^{⊗n}`, the reference marginal of the ideal merged state.
fn target_reference<T: Real>(c: &Copies<T>) -> CMat<T> {
    let (da, db, dr) = (c.da, c.db, c.dr);
    CMat::from_fn(dr, dr, |r, s| {
        let mut acc = cr(T::zero());
        for a in 0..da {
            for b in 0..db {
                acc += c.psi[(a, b * dr + r)] * c.psi[(a, b * dr + s)].conj();
            }
        }
        acc
    })
}

/// Ideal merged state as a `(â, b, b̂, e'') x (a', e, r)` matrix:
/// `ψ^{⊗n}_{ÂBR} ⊗ Φ_{A'B̂} ⊗ Φ_{EE''}`, padded to at least `min_rows` rows.
fn target_matrix<T: Real>(c: &Copies<T>, ap: usize, de: usize, min_rows: usize) -> CMat<T> {
    let (da, db, dr) = (c.da, c.db, c.dr);
    let rows = (da * db * ap * de).max(min_rows);
    let s = cr(T::one() / T::from_usize(ap * de).unwrap().sqrt());
    let mut m = CMat::<T>::zeros(rows, ap * de * dr);
    for a in 0..da {
        for b in 0..db {
            for x in 0..ap {
                for e in 0..de {
                    let row = ((a * db + b) * ap + x) * de + e;
                    for r in 0..dr {
                        m[(row, (x * de + e) * dr + r)] = c.psi[(a, b * dr + r)] * s;
                    }
                }
            }
        }
    }
    m
}

/// Reference marginal `M^T conj(M)` of a `X x Ref` coefficient matrix.
fn reference_marginal<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.transpose() * m.map(|z| z.conj())
}

fn maximally_mixed<T: Real>(d: usize) -> CMat<T> {
    linalg::identity::<T>(d) * cr(T::one() / T::from_usize(d).unwrap())
}

/// Mother protocol on `n` copies of `ψ_{ABR}` (factors read in that order):
/// Schumacher-project `A^n`, apply a Haar unitary, send the top `log_c`
/// qubits `C` to the receiver and keep `A'`.
///
/// The deficit is `||ρ_{A'R^n} - π_{A'} ⊗ ψ_R^{⊗n}||_1`; the fidelity is the
/// squared Uhlmann overlap with `ψ^{⊗n}_{ÂBR} ⊗ Φ_{A'B̂}` achieved by a
/// decoder on `C B^n`.
pub fn mother_protocol_run<T: Real>(
    psi: &MultipartiteState<T>,
    n: usize,
    log_c: usize,
    seed: u64,
    opts: &MergeOptions,
) -> PResult<ProtocolReport> {
    let start = Instant::now();
    let copies = tensor_power(psi, n)?;
    let sc = scramble(psi, &copies, n, seed, opts)?;
    if log_c > sc.log_d {
        return Err(ProtocolError::SplitTooLarge { log_c, log_d: sc.log_d });
    }
    let (c, ap) = (1usize << log_c, sc.d_s >> log_c);
    let (db, dr) = (copies.db, copies.dr);
    // X = (c, b), Ref = (a', r)
    let m1 = CMat::from_fn(c * db, ap * dr, |xi, ri| {
        let (ci, b, a, r) = (xi / db, xi % db, ri / dr, ri % dr);
        sc.phi[(ci * ap + a, b * dr + r)]
    });
    let m2 = target_matrix(&copies, ap, 1, m1.nrows());
    let ideal = linalg::kron(&maximally_mixed::<T>(ap), &target_reference(&copies));
    let deficit = linalg::trace_norm_herm(&(reference_marginal(&m1) - ideal));
    let uhl = uhlmann_matrices(&m1, &m2)?;
    Ok(ProtocolReport {
        protocol: "mother".into(),
        copies: n,
        seed,
        partition: ProtocolPartition { a_s: sc.d_s, a_prime: ap, c, c_prime: 1, b: db, r: dr, e: 1, e_prime: 1 },
        typical_dim: sc.typical_dim,
        typical_weight: sc.typical_weight,
        decoupling_deficit: deficit.as_f64(),
        merge_fidelity: (uhl.overlap * uhl.overlap).as_f64().min(1.0),
        ebit_yield: (ap as f64).log2(),
        alpha_dits_consumed: log_c as f64,
        decode_fidelity: None,
        side_product_fidelity: None,
        wall_clock: start.elapsed().as_secs_f64(),
    })
}

/// Non-catalytic merge through an α-dit channel.
///
/// After the scramble, `C` is padded with `|0>_{C'}` and sent through `ch`;
/// the receiver applies the subspace decoder for `span{|c>|0>}` and then an
/// Uhlmann decoder on everything it holds. The ideal final state is
/// `ψ^{⊗n}_{ÂBR} ⊗ Φ_{A'B̂} ⊗ Φ_{EE'}` and the deficit is measured on
/// `A' E R^n` against `π_{A'} ⊗ π_E ⊗ ψ_R^{⊗n}`.
pub fn noncatalytic_merge<T: Real>(
    psi: &MultipartiteState<T>,
    n: usize,
    ch: &QuantumChannel<T>,
    spec: &AlphaDitSpec,
    seed: u64,
    opts: &MergeOptions,
) -> PResult<ProtocolReport> {
    let start = Instant::now();
    let d_in = ch.input_dim();
    if spec.d != d_in {
        return Err(HilbertError::DimensionMismatch(format!(
            "channel input is {d_in} but the α-dit spec says {}",
            spec.d
        ))
        .into());
    }
    let rep = EntropyReport::from_state(psi)?;
    let copies = tensor_power(psi, n)?;
    let sc = scramble(psi, &copies, n, seed, opts)?;
    let log_c = transmitted_qubits(rep.mut_ar, n, opts.margin_qubits).min(sc.log_d);
    let c = 1usize << log_c;
    let k = spec.k();
    if c > k {
        return Err(ProtocolError::CapacityInsufficient { needed: c, d: d_in, alpha: spec.alpha, k });
    }
    if !d_in.is_multiple_of(c) {
        return Err(ProtocolError::PaddingMismatch { d_in, c });
    }
    let c_prime = d_in / c;
    let ap = sc.d_s / c;
    let (db, dr) = (copies.db, copies.dr);
    let (d_bch, de) = (ch.output().dim, ch.environment().dim);
    let rest = ap * db * dr;

    let basis = CMat::<T>::from_fn(d_in, c, |i, j| if i == j * c_prime { cr(T::one()) } else { cr(T::zero()) });
    let v_c = ch.isometry() * &basis;
    let phi_c = CMat::from_fn(c, rest, |ci, col| sc.phi[(ci * ap + col / (db * dr), col % (db * dr))]);
    let out = v_c * phi_c;
    let dec = decode_subspace(ch, &basis)?;
    let pad = dec.pad;
    // per environment value e: decoder output (c̃, e', p) x (a', b, r)
    let out2: Vec<CMat<T>> = (0..de)
        .map(|e| {
            let rows = CMat::from_fn(d_bch, rest, |bch, col| out[(bch * de + e, col)]);
            &dec.isometry * rows
        })
        .collect();
    let y_dec = c * de * pad;
    // Bob: X = (c̃ e' p, b); Ref = (a', e, r)
    let m1 = CMat::from_fn(y_dec * db, ap * de * dr, |xi, ri| {
        let (yd, b) = (xi / db, xi % db);
        let (a, e, r) = (ri / (de * dr), (ri / dr) % de, ri % dr);
        out2[e][(yd, (a * db + b) * dr + r)]
    });
    let m2 = target_matrix(&copies, ap, de, m1.nrows());
    let ideal = linalg::kron(
        &linalg::kron(&maximally_mixed::<T>(ap), &maximally_mixed::<T>(de)),
        &target_reference(&copies),
    );
    let deficit = linalg::trace_norm_herm(&(reference_marginal(&m1) - ideal));
    let uhl = uhlmann_matrices(&m1, &m2)?;

    // <Φ_EE'| ρ_EE' |Φ_EE'> = (1/d_E) Σ_{e,f} ρ[(e,e),(f,f)]
    let mut side = cr(T::zero());
    for e in 0..de {
        for f in 0..de {
            for ct in 0..c {
                for p in 0..pad {
                    let (re, rf) = ((ct * de + e) * pad + p, (ct * de + f) * pad + p);
                    for col in 0..rest {
                        side += out2[e][(re, col)] * out2[f][(rf, col)].conj();
                    }
                }
            }
        }
    }
    let side = side.re / T::from_usize(de).unwrap();

    Ok(ProtocolReport {
        protocol: "noncatalytic".into(),
        copies: n,
        seed,
        partition: ProtocolPartition { a_s: sc.d_s, a_prime: ap, c, c_prime, b: db, r: dr, e: de, e_prime: de },
        typical_dim: sc.typical_dim,
        typical_weight: sc.typical_weight,
        decoupling_deficit: deficit.as_f64(),
        merge_fidelity: (uhl.overlap * uhl.overlap).as_f64().min(1.0),
        ebit_yield: (ap as f64).log2(),
        alpha_dits_consumed: (d_in as f64).log2(),
        decode_fidelity: Some(dec.fidelity.as_f64()),
        side_product_fidelity: Some(side.as_f64()),
        wall_clock: start.elapsed().as_secs_f64(),
    })
}
