mod common;

use alphamerge::alpha_channel::make_n_alpha;
use alphamerge::entropy::EntropyReport;
use alphamerge::hilbert::{fidelity_matrices, haar_unitary, label, CMat, MultipartiteState};
use alphamerge::protocols::{
    catalytic_ledger, catalytic_ledger_from, mother_protocol_run, noncatalytic_consumption,
    noncatalytic_merge, schumacher_project, transmitted_qubits, uhlmann_isometry, MergeOptions,
    ProtocolError, ProtocolReport,
};
use alphamerge::State;
use approx::assert_abs_diff_eq;
use common::{c, ket, random_pure};
use proptest::prelude::*;

// numpy oracle, 500 seeds of GHZ n = 2 through N_α(16,8,2): squared
// Uhlmann fidelity min 0.884, 1% quantile 0.903.
const NONCAT_FLOOR: f64 = 0.85;

fn ghz() -> State {
    MultipartiteState::ghz(&["A", "B", "R"]).unwrap()
}

fn opts() -> MergeOptions {
    MergeOptions::default()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

/// Typical strings of diag(p) by direct enumeration over bit patterns.
fn brute_typical(p: &[f64; 2], n: usize, delta: f64) -> (usize, f64) {
    let h = -p.iter().map(|x| x * x.log2()).sum::<f64>();
    let cut = (-(n as f64) * (h + delta)).exp2();
    let mut dim = 0;
    let mut w = 0.0;
    for s in 0u32..(1 << n) {
        let ones = s.count_ones() as i32;
        let prob = p[0].powi(n as i32 - ones) * p[1].powi(ones);
        if prob >= cut {
            dim += 1;
            w += prob;
        }
    }
    (dim, w)
}

fn diag_purified(p: &[f64]) -> State {
    // sum_i sqrt(p_i) |i>_A |i>_B |0>_R
    let d = p.len();
    let mut v = alphamerge::Vector::zeros(d * d);
    for (i, &x) in p.iter().enumerate() {
        v[i * d + i] = c(x.sqrt(), 0.0);
    }
    State::pure(vec![label("A", d), label("B", d)], v).unwrap().tensor_with(&ket("R", 1, 0)).unwrap()
}

#[test]
fn schumacher_trivial_cases() {
    let pure = ket("A", 2, 0).tensor_with(&ket("B", 2, 1)).unwrap();
    for n in [1, 3, 5] {
        let t = schumacher_project(&pure, "A", n, 0.1).unwrap();
        assert_eq!(t.dim, 1);
        assert_abs_diff_eq!(t.weight, 1.0, epsilon = 1e-12);
    }
    let bell = MultipartiteState::<f64>::max_entangled("A", "B", 2).unwrap();
    for (n, delta) in [(1, 0.01), (4, 0.3), (6, 2.0)] {
        let t = schumacher_project(&bell, "A", n, delta).unwrap();
        assert_eq!(t.dim, 1 << n);
        assert_abs_diff_eq!(t.weight, 1.0, epsilon = 1e-12);
        let p = t.projector();
        assert!((p - CMat::identity(1 << n, 1 << n)).norm() < 1e-10);
    }
}

#[test]
fn schumacher_matches_enumeration() {
    let psi = diag_purified(&[0.9, 0.1]);
    for (n, delta) in [(6, 0.2), (6, 0.5), (8, 0.3), (5, 1.0)] {
        let t = schumacher_project(&psi, "A", n, delta).unwrap();
        let (dim, w) = brute_typical(&[0.9, 0.1], n, delta);
        assert_eq!(t.dim, dim, "n={n} delta={delta}");
        assert_abs_diff_eq!(t.weight, w, epsilon = 1e-12);
        assert!(t.weight >= 1.0 - t.tail_bound - 1e-12);
    }
    // n = 6, δ = 0.2: only the all-majority string survives
    let t = schumacher_project(&psi, "A", 6, 0.2).unwrap();
    assert_eq!(t.dim, 1);
    assert_abs_diff_eq!(t.weight, 0.9f64.powi(6), epsilon = 1e-12);
}

#[test]
fn schumacher_rejects_oversized_and_bad_args() {
    let psi = diag_purified(&[0.5, 0.5]);
    assert!(matches!(schumacher_project(&psi, "A", 15, 0.1), Err(ProtocolError::Hilbert(_))));
    assert!(matches!(schumacher_project(&psi, "A", 0, 0.1), Err(ProtocolError::NoCopies)));
    assert!(matches!(schumacher_project(&psi, "A", 2, 0.0), Err(ProtocolError::BadDelta(_))));
}

#[test]
fn uhlmann_identity_and_relabeling() {
    let phi = random_pure(&[("X", 3), ("R", 3)], 4);
    let u = uhlmann_isometry(&phi, &["X"], &phi, &["X"]).unwrap();
    assert_abs_diff_eq!(u.overlap, 1.0, epsilon = 1e-10);
    assert!((u.isometry.clone() - CMat::identity(3, 3)).norm() < 1e-8);

    // embed X into Y (dim 5) and rotate
    let embed = CMat::from_fn(5, 3, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let uy: CMat<f64> = haar_unitary(5, 8);
    let op = &uy * &embed;
    let phi2 = phi.apply_operator("X", &op, &[label("Y", 5)]).unwrap();
    let u = uhlmann_isometry(&phi, &["X"], &phi2, &["Y"]).unwrap();
    assert_abs_diff_eq!(u.overlap, 1.0, epsilon = 1e-10);
    // only the action on the support of ρ_X is determined; it is full rank here
    assert!((u.isometry - op).norm() < 1e-8);
}

#[test]
fn uhlmann_literal_overlap() {
    // F(|0><0|, diag(0.93², 1 - 0.93²)) = 0.93
    let a = 0.93f64;
    let phi1 = ket("X", 2, 0).tensor_with(&ket("R", 2, 0)).unwrap();
    let v = alphamerge::Vector::from_vec(vec![c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - a * a).sqrt(), 0.0)]);
    let phi2 = State::pure(vec![label("Y", 2), label("R", 2)], v).unwrap();
    let u = uhlmann_isometry(&phi1, &["X"], &phi2, &["Y"]).unwrap();
    assert_abs_diff_eq!(u.overlap, 0.93, epsilon = 1e-12);
}

#[test]
fn uhlmann_target_too_small() {
    let phi1 = random_pure(&[("X", 4), ("R", 4)], 1);
    let phi2 = random_pure(&[("Y", 2), ("R", 4)], 2);
    assert!(matches!(
        uhlmann_isometry(&phi1, &["X"], &phi2, &["Y"]),
        Err(ProtocolError::TargetTooSmall { y: 2, rank: 4 })
    ));
    let phi3 = random_pure(&[("Y", 4), ("S", 4)], 2);
    assert!(matches!(uhlmann_isometry(&phi1, &["X"], &phi3, &["Y"]), Err(ProtocolError::ReferenceMismatch(_))));
}

#[test]
fn uhlmann_overlap_is_marginal_fidelity_on_random_pairs() {
    for s in 0..100u64 {
        let phi1 = random_pure(&[("X", 3), ("R", 4)], 2 * s);
        let phi2 = random_pure(&[("Y", 5), ("R", 4)], 2 * s + 1);
        let u = uhlmann_isometry(&phi1, &["X"], &phi2, &["Y"]).unwrap();
        let r1 = phi1.partial_trace(&["R"]).unwrap().density_matrix();
        let r2 = phi2.partial_trace(&["R"]).unwrap().density_matrix();
        assert_abs_diff_eq!(u.overlap, fidelity_matrices(&r1, &r2), epsilon = 1e-6);
        // the decoder achieves it
        let out = phi1.apply_operator("X", &u.isometry, &[label("Y", 5)]).unwrap();
        let ov = (out.vector().unwrap().adjoint() * phi2.vector().unwrap())[(0, 0)].norm();
        assert_abs_diff_eq!(ov, u.overlap, epsilon = 1e-8);
    }
}

#[test]
fn mother_on_bell_states() {
    let bell_ar = MultipartiteState::<f64>::max_entangled("A", "R", 2)
        .unwrap()
        .tensor_with(&ket("B", 2, 0))
        .unwrap()
        .reorder(&["A", "B", "R"])
        .unwrap();
    let full = mother_protocol_run(&bell_ar, 1, 1, 3, &opts()).unwrap();
    assert_abs_diff_eq!(full.decoupling_deficit, 0.0, epsilon = 1e-10);
    assert_abs_diff_eq!(full.merge_fidelity, 1.0, epsilon = 1e-10);
    let none = mother_protocol_run(&bell_ar, 1, 0, 3, &opts()).unwrap();
    assert_abs_diff_eq!(none.decoupling_deficit, 1.5, epsilon = 1e-10);
    assert!(none.merge_fidelity < 0.5);

    let bell_ab = MultipartiteState::<f64>::max_entangled("A", "B", 2).unwrap().tensor_with(&ket("R", 2, 0)).unwrap();
    let r = mother_protocol_run(&bell_ab, 1, 0, 5, &opts()).unwrap();
    assert_abs_diff_eq!(r.merge_fidelity, 1.0, epsilon = 1e-10);
    assert_abs_diff_eq!(r.ebit_yield, 1.0, epsilon = 1e-12);
    assert!(r.partition.split_conserved());
}

#[test]
fn mother_ghz_deficit_falls_with_sent_qubits() {
    let psi = ghz();
    let med: Vec<f64> = (0..=4)
        .map(|lc| median((0..20).map(|s| mother_protocol_run(&psi, 4, lc, s, &opts()).unwrap().decoupling_deficit).collect()))
        .collect();
    for w in med.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{med:?}");
    }
    // endpoints are seed independent
    assert_abs_diff_eq!(med[0], 1.875, epsilon = 1e-9);
    assert_abs_diff_eq!(med[4], 0.0, epsilon = 1e-9);
}

#[test]
fn mother_split_too_large() {
    assert!(matches!(
        mother_protocol_run(&ghz(), 2, 3, 0, &opts()),
        Err(ProtocolError::SplitTooLarge { log_c: 3, log_d: 2 })
    ));
}

#[test]
fn noncat_ghz_through_half_alpha_channel() {
    let (ch, spec) = make_n_alpha::<f64>(16, 8, 2, 41).unwrap();
    let r = noncatalytic_merge(&ghz(), 2, &ch, &spec, 7, &opts()).unwrap();
    assert_eq!(r.partition.c, 4);
    assert_eq!(r.partition.c_prime, 4);
    assert!(r.merge_fidelity >= NONCAT_FLOOR, "{}", r.merge_fidelity);
    assert!(r.merge_fidelity >= 1.0 - r.decoupling_deficit - 1e-6);
    assert_abs_diff_eq!(r.alpha_dits_consumed, 4.0, epsilon = 1e-12);
    let side = r.side_product_fidelity.unwrap();
    assert!((0.0..=1.0 + 1e-9).contains(&side));
}

#[test]
fn noncat_undersized_channel_is_a_capacity_error() {
    // d_E = d_B is not an α-dit channel at all
    assert!(make_n_alpha::<f64>(16, 4, 4, 41).is_err());
    // α = (3 - 2) / 4 = 0.25: floor(16^0.25) = 2 < 4
    let (ch, spec) = make_n_alpha::<f64>(16, 8, 4, 41).unwrap();
    let err = noncatalytic_merge(&ghz(), 2, &ch, &spec, 7, &opts()).unwrap_err();
    assert!(matches!(err, ProtocolError::CapacityInsufficient { needed: 4, k: 2, .. }));
    let top: alphamerge::Error = err.into();
    assert!(top.to_string().contains("α-dit capacity insufficient"));
    assert!(top.to_string().starts_with("[merging-protocols]"));
}

#[test]
fn noncat_without_correlation_sends_nothing() {
    // A is in a product state with BR
    let psi = ket("A", 2, 1)
        .tensor_with(&MultipartiteState::<f64>::max_entangled("B", "R", 2).unwrap())
        .unwrap();
    let (ch, spec) = make_n_alpha::<f64>(4, 4, 1, 2).unwrap();
    let r = noncatalytic_merge(&psi, 2, &ch, &spec, 1, &opts()).unwrap();
    assert_eq!(r.partition.c, 1);
    assert_abs_diff_eq!(r.merge_fidelity, 1.0, epsilon = 1e-10);
}

#[test]
fn noiseless_noncat_reproduces_mother() {
    let psi = ghz();
    let (ch, spec) = make_n_alpha::<f64>(4, 4, 1, 99).unwrap();
    let mut diffs = Vec::new();
    for s in 0..20 {
        let nc = noncatalytic_merge(&psi, 2, &ch, &spec, s, &opts()).unwrap();
        let m = mother_protocol_run(&psi, 2, nc.partition.log_c(), s, &opts()).unwrap();
        diffs.push((nc.merge_fidelity - m.merge_fidelity).abs());
        assert_abs_diff_eq!(nc.decode_fidelity.unwrap(), 1.0, epsilon = 1e-8);
    }
    assert!(median(diffs) <= 0.02);
}

#[test]
fn transmitted_qubit_sizing() {
    assert_eq!(transmitted_qubits(0.0, 4, 1), 0);
    assert_eq!(transmitted_qubits(1.0, 2, 1), 2);
    assert_eq!(transmitted_qubits(1.0, 4, 1), 3);
    assert_eq!(transmitted_qubits(0.3, 3, 0), 1);
}

#[test]
fn catalytic_ledger_examples() {
    let l = catalytic_ledger_from(1.0, 0.2, 0.6).unwrap();
    assert_abs_diff_eq!(l.alpha_bits_consumed, 0.75, epsilon = 1e-12);
    assert_abs_diff_eq!(l.net_yield, 0.25, epsilon = 1e-12);
    assert!(!l.consumes_entanglement);

    // α = H(A|B)/H(A): consumption equals H(A), yield vanishes
    let l = catalytic_ledger_from(1.5, 0.3, 0.2).unwrap();
    assert_abs_diff_eq!(l.alpha_bits_consumed, 1.5, epsilon = 1e-12);
    assert_abs_diff_eq!(l.net_yield, 0.0, epsilon = 1e-12);

    let bell_ab = MultipartiteState::<f64>::max_entangled("A", "B", 2).unwrap().tensor_with(&ket("R", 2, 0)).unwrap();
    let l = catalytic_ledger(&bell_ab, 0.5).unwrap();
    assert_abs_diff_eq!(l.alpha_bits_consumed, 0.0, epsilon = 1e-10);
    assert_abs_diff_eq!(l.net_yield, 1.0, epsilon = 1e-10);

    let l = catalytic_ledger_from(1.0, 0.2, 0.1).unwrap();
    assert!(l.consumes_entanglement && l.flag.is_some());
    assert!(matches!(catalytic_ledger_from(1.0, 0.2, 0.0), Err(ProtocolError::AlphaOutOfRange(_))));
}

#[test]
fn report_serializes() {
    let r = mother_protocol_run(&ghz(), 1, 1, 0, &opts()).unwrap();
    let j = serde_json::to_value(&r).unwrap();
    for key in ["decouplingDeficit", "mergeFidelity", "ebitYield", "alphaDitsConsumed", "copies", "wallClock"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    let back: ProtocolReport = serde_json::from_value(j).unwrap();
    assert_eq!(back, r);
    let header = ProtocolReport::csv_header();
    assert_eq!(header.split(',').count(), r.csv_row().split(',').count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn catalytic_never_exceeds_noncatalytic(h in 0.1f64..3.0, frac in -1.0f64..1.0, alpha in 0.01f64..=1.0) {
        let cond = frac * h;
        let l = catalytic_ledger_from(h, cond, alpha).unwrap();
        let nc = noncatalytic_consumption(l.mut_ar, alpha).unwrap();
        prop_assert!(l.alpha_bits_consumed <= nc + 1e-12);
        let l1 = catalytic_ledger_from(h, cond, 1.0).unwrap();
        prop_assert!((l1.alpha_bits_consumed - noncatalytic_consumption(l1.mut_ar, 1.0).unwrap()).abs() < 1e-12);
        prop_assert!((l.ebits_returned - l.alpha_bits_consumed - l.net_yield).abs() < 1e-12);
    }

    #[test]
    fn fidelity_bounded_by_deficit(seed in 0u64..500, lc in 0usize..=2) {
        let psi = random_pure(&[("A", 2), ("B", 2), ("R", 2)], seed);
        // wide typicality window keeps all four strings of A^2
        let wide = MergeOptions { delta: 10.0, ..opts() };
        let r = mother_protocol_run(&psi, 2, lc, seed, &wide).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.merge_fidelity));
        prop_assert!(r.merge_fidelity >= 1.0 - r.decoupling_deficit - 1e-6);
    }

    #[test]
    fn ledger_uses_entropy_identity(seed in 0u64..500) {
        let psi = random_pure(&[("A", 2), ("B", 3), ("R", 2)], seed);
        let rep = EntropyReport::from_state(&psi).unwrap();
        let l = catalytic_ledger(&psi, 0.7).unwrap();
        prop_assert!((l.mut_ar - rep.mut_ar).abs() < 1e-8);
    }
}
