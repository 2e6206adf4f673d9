use alphamerge::hilbert::{
    fidelity, haar_unitary, label, linalg, trace_distance, CMat, CVec, HilbertError,
    MultipartiteState, QuantumChannel,
};
use alphamerge::rng;
use alphamerge::{Channel, State};
use approx::assert_abs_diff_eq;
use nalgebra::Complex;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn ket(name: &str, d: usize, i: usize) -> State {
    State::basis(vec![label(name, d)], i).unwrap()
}

fn random_mixed(names: &[(&str, usize)], rank: usize, seed: u64) -> State {
    let d: usize = names.iter().map(|x| x.1).product();
    let g: CMat<f64> =
        alphamerge::hilbert::complex_gaussian(d, rank, &mut rng::stream(seed, 0));
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    let factors = names.iter().map(|(n, d)| label(n, *d)).collect();
    State::mixed(factors, m / c(tr, 0.0)).unwrap()
}

fn random_pure(names: &[(&str, usize)], seed: u64) -> State {
    let d: usize = names.iter().map(|x| x.1).product();
    let g: CMat<f64> = alphamerge::hilbert::complex_gaussian(d, 1, &mut rng::stream(seed, 1));
    let v: CVec<f64> = g.column(0).into_owned();
    let n = v.norm();
    State::pure(names.iter().map(|(n, d)| label(n, *d)).collect(), v / c(n, 0.0)).unwrap()
}

#[test]
fn tensor_of_basis_kets() {
    let s = State::tensor(&[&ket("A", 2, 0), &ket("B", 2, 0)]).unwrap();
    assert_eq!(s.dims(), vec![2, 2]);
    let v = s.vector().unwrap();
    assert_abs_diff_eq!(v[0].re, 1.0);
    assert_abs_diff_eq!(v.norm(), 1.0);
}

#[test]
fn tensor_of_bell_pairs_is_pure() {
    let b1 = State::max_entangled("A", "B", 2).unwrap();
    let b2 = State::max_entangled("C", "D", 2).unwrap();
    let s = State::tensor(&[&b1, &b2]).unwrap();
    assert_eq!(s.total_dim(), 16);
    assert_abs_diff_eq!(s.to_mixed().purity(), 1.0, epsilon = 1e-12);
}

#[test]
fn tensor_of_maximally_mixed_qubits() {
    let a = State::maximally_mixed("A", 2).unwrap();
    let b = State::maximally_mixed("B", 2).unwrap();
    for x in State::tensor(&[&a, &b]).unwrap().spectrum() {
        assert_abs_diff_eq!(x, 0.25, epsilon = 1e-12);
    }
}

#[test]
fn tensor_rejects_name_collision() {
    let a = ket("A", 2, 0);
    assert_eq!(
        State::tensor(&[&a, &a]).unwrap_err(),
        HilbertError::NameCollision("A".into())
    );
}

#[test]
fn bell_marginal_is_maximally_mixed() {
    let b = State::max_entangled("A", "B", 2).unwrap();
    let m = b.partial_trace(&["A"]).unwrap().density_matrix();
    assert_abs_diff_eq!((m - CMat::identity(2, 2) * c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-12);
}

#[test]
fn product_marginal_factorizes() {
    let ra = random_mixed(&[("A", 3)], 2, 1);
    let rb = random_mixed(&[("B", 2)], 2, 2);
    let s = State::tensor(&[&ra, &rb]).unwrap();
    let back = s.partial_trace(&["A"]).unwrap();
    assert!(trace_distance(&back, &ra).unwrap() < 1e-12);
    let back_b = s.partial_trace(&["B"]).unwrap();
    assert!(trace_distance(&back_b, &rb).unwrap() < 1e-12);
}

#[test]
fn ghz_marginal_on_outer_pair() {
    let g = State::ghz(&["A", "B", "R"]).unwrap();
    let m = g.partial_trace(&["A", "R"]).unwrap().density_matrix();
    let mut expected = CMat::zeros(4, 4);
    expected[(0, 0)] = c(0.5, 0.0);
    expected[(3, 3)] = c(0.5, 0.0);
    assert_abs_diff_eq!((m - expected).norm(), 0.0, epsilon = 1e-12);
}

#[test]
fn partial_trace_unknown_label() {
    let g = State::ghz(&["A", "B"]).unwrap();
    assert_eq!(
        g.partial_trace(&["Z"]).unwrap_err(),
        HilbertError::UnknownSystem("Z".into())
    );
}

#[test]
fn partial_trace_keeps_original_order_and_matches_mixed_path() {
    let s = random_pure(&[("A", 2), ("B", 3), ("C", 2)], 9);
    let pure_path = s.partial_trace(&["C", "A"]).unwrap();
    assert_eq!(pure_path.names(), vec!["A", "C"]);
    let mixed_path = s.to_mixed().partial_trace(&["A", "C"]).unwrap();
    assert!(trace_distance(&pure_path, &mixed_path).unwrap() < 1e-12);
}

#[test]
fn purify_maximally_mixed_gives_bell() {
    let p = State::maximally_mixed("A", 2).unwrap().purify(label("R", 2)).unwrap();
    let bell = State::max_entangled("A", "R", 2).unwrap();
    // equal up to a unitary on R: compare marginals and entanglement
    assert_abs_diff_eq!(
        trace_distance(&p.partial_trace(&["A"]).unwrap(), &bell.partial_trace(&["A"]).unwrap())
            .unwrap(),
        0.0,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(p.partial_trace(&["R"]).unwrap().purity(), 0.5, epsilon = 1e-12);
}

#[test]
fn purify_pure_with_trivial_reference() {
    let s = random_pure(&[("A", 3)], 4);
    let p = s.to_mixed().purify(label("R", 1)).unwrap();
    assert_abs_diff_eq!(fidelity(&p.partial_trace(&["A"]).unwrap(), &s).unwrap(), 1.0, epsilon = 1e-8);
}

#[test]
fn purify_rank_three_round_trip_and_rank_error() {
    let rho = random_mixed(&[("A", 4)], 3, 17);
    let p = rho.purify(label("R", 3)).unwrap();
    assert!(trace_distance(&p.partial_trace(&["A"]).unwrap(), &rho).unwrap() < 1e-8);
    assert_eq!(
        rho.purify(label("R", 2)).unwrap_err(),
        HilbertError::ReferenceTooSmall { given: 2, rank: 3 }
    );
}

#[test]
fn haar_first_moment() {
    // E|U_00|^2 = 1/8, variance of |U_00|^2 for d = 8 is (d-1)/(d^2 (d+1))
    let n = 10_000;
    let mut sum = 0.0;
    let mut r = rng::stream(2024, 0);
    for _ in 0..n {
        let u: CMat<f64> = alphamerge::hilbert::haar_unitary_with(8, &mut r);
        sum += u[(0, 0)].norm_sqr();
    }
    let mean = sum / n as f64;
    let sd = (7.0 / (64.0 * 9.0) / n as f64).sqrt();
    assert!((mean - 0.125).abs() < 3.0 * sd, "mean {mean}");
}

#[test]
fn haar_invariance_under_fixed_left_multiplication() {
    // distribution of |(W U)_00|^2 matches |U_00|^2 for a fixed unitary W
    let w: CMat<f64> = haar_unitary(4, 99);
    let n = 4000;
    let mut r = rng::stream(7, 0);
    let (mut a, mut b) = (0.0, 0.0);
    for _ in 0..n {
        let u: CMat<f64> = alphamerge::hilbert::haar_unitary_with(4, &mut r);
        a += u[(0, 0)].norm_sqr().powi(2);
        b += (&w * &u)[(0, 0)].norm_sqr().powi(2);
    }
    // E|U_00|^4 = 2/(d(d+1)) = 0.1
    assert!((a / n as f64 - 0.1).abs() < 0.01);
    assert!((b / n as f64 - 0.1).abs() < 0.01);
}

#[test]
fn haar_isometry_examples() {
    let ch = Channel::haar(4, label("B", 4), label("E", 2), 1).unwrap();
    assert!(linalg::isometry_defect(ch.isometry()) < 1e-10);
    let sq = Channel::haar(8, label("B", 4), label("E", 2), 1).unwrap();
    assert_eq!(sq.isometry().shape(), (8, 8));
    let big = Channel::haar(16, label("B", 8), label("E", 2), 3).unwrap();
    let input = random_mixed(&[("A", 16)], 5, 8);
    let out = big.apply(&input, "A").unwrap();
    assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-10);
    assert_eq!(
        Channel::haar(16, label("B", 4), label("E", 2), 0).unwrap_err(),
        HilbertError::OutputTooSmall { d_in: 16, d_out: 8 }
    );
}

#[test]
fn identity_channel_leaves_state_unchanged() {
    let s = random_pure(&[("A", 3), ("R", 2)], 3);
    let id = Channel::identity(3, "B", "E").unwrap();
    let out = id.apply(&s, "A").unwrap();
    assert_eq!(out.names(), vec!["B", "E", "R"]);
    let back = out.trace_out(&["E"]).unwrap().rename("B", "A").unwrap();
    assert_abs_diff_eq!(fidelity(&back, &s).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn channel_does_not_touch_reference() {
    let s = random_pure(&[("A", 4), ("R", 4)], 12);
    let ch = Channel::haar(4, label("B", 2), label("E", 4), 5).unwrap();
    let out = ch.apply(&s, "A").unwrap();
    let r_before = s.partial_trace(&["R"]).unwrap();
    let r_after = out.partial_trace(&["R"]).unwrap();
    assert!(trace_distance(&r_before, &r_after).unwrap() < 1e-10);
}

#[test]
fn replacement_channel_forgets_input() {
    let phi = CVec::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    let ch = QuantumChannel::replacement_from(3, &phi, "B", "E").unwrap();
    let x = ch.apply(&random_mixed(&[("A", 3)], 2, 1), "A").unwrap();
    let y = ch.apply(&ket("A", 3, 2), "A").unwrap();
    let d = trace_distance(&x.partial_trace(&["B"]).unwrap(), &y.partial_trace(&["B"]).unwrap())
        .unwrap();
    assert!(d < 1e-12);
}

#[test]
fn apply_channel_dimension_mismatch() {
    let ch = Channel::identity(3, "B", "E").unwrap();
    assert!(matches!(
        ch.apply(&ket("A", 2, 0), "A"),
        Err(HilbertError::DimensionMismatch(_))
    ));
}

#[test]
fn complementary_swaps_outputs() {
    let ch = Channel::haar(3, label("B", 2), label("E", 3), 8).unwrap();
    let rho = random_mixed(&[("A", 3)], 3, 2).density_matrix();
    let comp = ch.complementary();
    assert_abs_diff_eq!(
        (comp.output_matrix(&rho) - ch.environment_matrix(&rho)).norm(),
        0.0,
        epsilon = 1e-12
    );
    let full = ch.apply(&State::mixed(vec![label("A", 3)], rho.clone()).unwrap(), "A").unwrap();
    let e = full.partial_trace(&["E"]).unwrap().density_matrix();
    assert_abs_diff_eq!((e - ch.environment_matrix(&rho)).norm(), 0.0, epsilon = 1e-12);
}

#[test]
fn trace_distance_examples() {
    let z0 = ket("A", 2, 0);
    let z1 = ket("A", 2, 1);
    let plus = State::pure(
        vec![label("A", 2)],
        CVec::from_vec(vec![c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)]),
    )
    .unwrap();
    assert_abs_diff_eq!(trace_distance(&z0, &z0).unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(trace_distance(&z0, &z1).unwrap(), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(trace_distance(&z0, &plus).unwrap(), 2f64.sqrt(), epsilon = 1e-12);
    // mixed route agrees
    assert_abs_diff_eq!(
        trace_distance(&z0.to_mixed(), &plus.to_mixed()).unwrap(),
        2f64.sqrt(),
        epsilon = 1e-12
    );
    assert!(matches!(
        trace_distance(&z0, &ket("A", 3, 0)),
        Err(HilbertError::DimensionMismatch(_))
    ));
}

#[test]
fn fidelity_examples() {
    let z0 = ket("A", 2, 0);
    let z1 = ket("A", 2, 1);
    let mm = State::maximally_mixed("A", 2).unwrap();
    assert_abs_diff_eq!(fidelity(&z0, &z0).unwrap(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(fidelity(&z0, &z1).unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(fidelity(&mm, &z0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(fidelity(&mm, &z0.to_mixed()).unwrap(), 0.5f64.sqrt(), epsilon = 1e-7);
}

#[test]
fn json_round_trip() {
    let s = random_mixed(&[("A", 2), ("B", 3)], 2, 4);
    let back = State::from_json_str(&s.to_json_string()).unwrap();
    assert_eq!(back.names(), vec!["A", "B"]);
    assert!(trace_distance(&s, &back).unwrap() < 1e-12);
    let p = random_pure(&[("A", 2)], 1);
    let j = p.to_json();
    assert_eq!(j.kind, "pure");
    assert_eq!(j.data.len(), 4);
    let raw = r#"{"dims":[2],"kind":"mixed","data":[1,0,0,0,0,0,0,0]}"#;
    let parsed = State::from_json_str(raw).unwrap();
    assert_eq!(parsed.names(), vec!["S0"]);
    assert!(State::from_json_str(r#"{"dims":[2],"kind":"mixed","data":[2,0,0,0,0,0,0,0]}"#).is_err());
}

#[test]
fn reorder_merge_split_round_trip() {
    let s = random_pure(&[("A", 2), ("B", 3), ("C", 2)], 21);
    let r = s.reorder(&["C", "A", "B"]).unwrap();
    let back = r.reorder(&["A", "B", "C"]).unwrap();
    assert_abs_diff_eq!(fidelity(&s, &back).unwrap(), 1.0, epsilon = 1e-12);
    let m = s.merge(&["C", "A"], "X").unwrap();
    assert_eq!(m.names(), vec!["X", "B"]);
    let sp = m.split("X", &[("C", 2), ("A", 2)]).unwrap().reorder(&["A", "B", "C"]).unwrap();
    assert_abs_diff_eq!(fidelity(&s, &sp).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn single_precision_kernels_work() {
    let b = MultipartiteState::<f32>::max_entangled("A", "B", 2).unwrap();
    let m = b.partial_trace(&["A"]).unwrap();
    let mm = MultipartiteState::<f32>::maximally_mixed("A", 2).unwrap();
    assert!(trace_distance(&m, &mm).unwrap() < 1e-5);
    let ch = QuantumChannel::<f32>::haar(2, label("C", 2), label("E", 2), 3).unwrap();
    let out = ch.apply(&b, "A").unwrap();
    assert!((out.trace() - 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fuchs_van_de_graaf(seed in 0u64..10_000, r1 in 1usize..4, r2 in 1usize..4) {
        let a = random_mixed(&[("A", 3)], r1, seed);
        let b = random_mixed(&[("A", 3)], r2, seed + 77_777);
        let t = trace_distance(&a, &b).unwrap();
        let f = fidelity(&a, &b).unwrap();
        prop_assert!(2.0 * (1.0 - f) <= t + 1e-8);
        prop_assert!(t <= 2.0 * (1.0 - f * f).max(0.0).sqrt() + 1e-8);
    }

    #[test]
    fn channel_preserves_trace(seed in 0u64..10_000, db in 1usize..4, de in 1usize..4) {
        prop_assume!(db * de >= 2);
        let ch = Channel::haar(2, label("B", db), label("E", de), seed).unwrap();
        let s = random_mixed(&[("A", 2), ("R", 2)], 3, seed);
        let out = ch.apply(&s, "A").unwrap();
        prop_assert!((out.trace() - s.trace()).abs() < 1e-10);
    }

    #[test]
    fn symmetric_distance(seed in 0u64..10_000) {
        let a = random_mixed(&[("A", 2)], 2, seed);
        let b = random_mixed(&[("A", 2)], 1, seed + 1);
        prop_assert!((trace_distance(&a, &b).unwrap() - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn purify_round_trip_hundred_states() {
    for seed in 0..100u64 {
        let rank = 1 + (seed as usize % 4);
        let rho = random_mixed(&[("A", 2), ("B", 2)], rank, seed);
        let p = rho.purify(label("R", 4)).unwrap();
        let back = p.partial_trace(&["A", "B"]).unwrap();
        assert!(trace_distance(&back, &rho).unwrap() < 1e-8, "seed {seed}");
    }
}
