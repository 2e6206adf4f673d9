mod common;

use alphamerge::alpha_channel::{
    decode_subspace, decoupling_check, forgetfulness_deficit, make_n_alpha, verify_duality,
    AlphaDitSpec, ChannelError, SubspaceKind,
};
use alphamerge::hilbert::{haar_isometry_matrix, label, CMat, CVec, MultipartiteState};
use alphamerge::rng;
use alphamerge::{Channel, State};
use approx::assert_abs_diff_eq;
use common::c;
use proptest::prelude::*;

// Thresholds frozen from a numpy Monte-Carlo run over 500 channel seeds
// (100 Haar 4-frames each): min 4-dim fidelity 0.6529, full-space 0.25.
const F4: f64 = 0.60;
const F16: f64 = 0.30;
// Same oracle, k = 16 forgetfulness: 1.5 for every channel with the
// maximally entangled input.
const FORGET16: f64 = 1.4;

fn n_alpha(seed: u64) -> Channel {
    make_n_alpha(16, 8, 2, seed).unwrap().0
}

fn haar_frame(d: usize, k: usize, seed: u64) -> CMat<f64> {
    haar_isometry_matrix(k, d, &mut rng::stream(seed, 0))
}

fn first_k(d: usize, k: usize) -> CMat<f64> {
    CMat::identity(d, k)
}

/// Chirped DFT: deterministic 16x16 unitary shared with the oracle script.
fn chirp_unitary() -> CMat<f64> {
    let n = 16;
    let tau = std::f64::consts::TAU;
    let f = CMat::from_fn(n, n, |i, j| {
        let t = tau * (i * j) as f64 / n as f64;
        c(t.cos(), t.sin()) / c((n as f64).sqrt(), 0.0)
    });
    let d = CMat::from_fn(n, n, |i, j| {
        if i == j {
            let t = std::f64::consts::PI * (i * i) as f64 / 7.0;
            c(t.cos(), t.sin())
        } else {
            c(0.0, 0.0)
        }
    });
    &f * d * &f
}

#[test]
fn alpha_from_dimensions() {
    let (_, s) = make_n_alpha::<f64>(4, 4, 1, 0).unwrap();
    assert_abs_diff_eq!(s.alpha, 1.0, epsilon = 1e-12);
    let (_, s) = make_n_alpha::<f64>(16, 8, 2, 0).unwrap();
    assert_abs_diff_eq!(s.alpha, 0.5, epsilon = 1e-12);
    assert_eq!(s.k(), 4);
    let (_, s) = make_n_alpha::<f64>(8, 4, 2, 0).unwrap();
    assert_abs_diff_eq!(s.alpha, 1.0 / 3.0, epsilon = 1e-12);
    assert_eq!(s.k(), 2);
}

#[test]
fn environment_as_large_as_output_is_rejected() {
    let err = make_n_alpha::<f64>(4, 2, 2, 0).unwrap_err();
    assert!(matches!(err, ChannelError::EnvironmentTooLarge { d_b: 2, d_e: 2 }));
    assert!(err.to_string().contains("less than half"));
    let err: alphamerge::Error = err.into();
    assert!(err.to_string().starts_with("[alpha-channel]"));
}

#[test]
fn k_floors_with_exact_powers() {
    assert_eq!(AlphaDitSpec { d: 16, alpha: 0.5, epsilon: None }.k(), 4);
    assert_eq!(AlphaDitSpec { d: 8, alpha: 1.0 / 3.0, epsilon: None }.k(), 2);
    assert_eq!(AlphaDitSpec { d: 16, alpha: 0.0, epsilon: None }.k(), 1);
    assert_eq!(AlphaDitSpec { d: 10, alpha: 0.5, epsilon: Some(0.1) }.k(), 3);
}

#[test]
fn identity_channel_decodes_everything() {
    let ch = Channel::identity(6, "B", "E").unwrap();
    for k in [1, 3, 6] {
        let dec = decode_subspace(&ch, &haar_frame(6, k, k as u64)).unwrap();
        assert_abs_diff_eq!(dec.fidelity, 1.0, epsilon = 1e-10);
    }
}

#[test]
fn non_orthonormal_basis_is_rejected() {
    let ch = n_alpha(1);
    let mut b = first_k(16, 2);
    b[(0, 1)] = c(1e-6, 0.0);
    assert!(matches!(decode_subspace(&ch, &b), Err(ChannelError::NotOrthonormal(_))));
    let mut b = first_k(16, 2);
    b[(0, 1)] = c(1e-10, 0.0);
    assert!(decode_subspace(&ch, &b).is_ok());
}

#[test]
fn decode_matches_frozen_literal_values() {
    let ch = Channel::from_isometry(chirp_unitary(), label("B", 8), label("E", 2)).unwrap();
    for (k, want) in [(2, 0.634688520441), (4, 0.468536901680), (8, 0.355284962020), (16, 0.25)] {
        let dec = decode_subspace(&ch, &first_k(16, k)).unwrap();
        assert_abs_diff_eq!(dec.fidelity, want, epsilon = 1e-9);
    }
}

#[test]
fn decoder_is_an_isometry_with_padding() {
    // k d_E = 2 < d_B = 8 forces a padding register
    let ch = n_alpha(3);
    let dec = decode_subspace(&ch, &haar_frame(16, 1, 9)).unwrap();
    assert_eq!(dec.pad, 4);
    let w = &dec.isometry;
    let gram = w.adjoint() * w;
    assert!((gram - CMat::identity(8, 8)).norm() < 1e-10);
}

#[test]
fn four_dim_subspaces_beat_full_space() {
    let ch = n_alpha(7);
    let worst = (0..100)
        .map(|t| decode_subspace(&ch, &haar_frame(16, 4, rng::child_seed(7, t))).unwrap().fidelity)
        .fold(f64::INFINITY, f64::min);
    let full = decode_subspace(&ch, &first_k(16, 16)).unwrap().fidelity;
    assert!(worst >= F4, "worst 4-dim fidelity {worst}");
    assert!(full <= F16, "full-space fidelity {full}");
}

#[test]
fn fidelity_median_falls_with_subspace_dimension() {
    let ch = n_alpha(11);
    let median = |k: usize| {
        let mut v: Vec<f64> = (0..50)
            .map(|s| decode_subspace(&ch, &haar_frame(16, k, 100 + s)).unwrap().fidelity)
            .collect();
        v.sort_by(f64::total_cmp);
        (v[24] + v[25]) / 2.0
    };
    let m: Vec<f64> = [1, 2, 4, 8, 16].iter().map(|&k| median(k)).collect();
    for w in m.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{m:?}");
    }
}

#[test]
fn trivial_environment_decodes_perfectly() {
    let (ch, spec) = make_n_alpha::<f64>(4, 4, 1, 5).unwrap();
    assert_eq!(spec.k(), 4);
    for k in 1..=4 {
        for s in 0..5 {
            let dec = decode_subspace(&ch, &haar_frame(4, k, s)).unwrap();
            assert_abs_diff_eq!(dec.fidelity, 1.0, epsilon = 1e-8);
        }
    }
}

#[test]
fn replacement_channel_forgets() {
    let w = CVec::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    let ch = Channel::replacement_from(3, &w, "B", "E").unwrap();
    // this dilation puts the fixed state on B; swap so the constant part is
    // the environment being tested
    let cc = ch.complementary();
    let f = forgetfulness_deficit(&cc, 3, 50, 1).unwrap();
    assert!(f.lower_bound < 1e-8, "{}", f.lower_bound);
}

#[test]
fn identity_channel_forgets() {
    let ch = Channel::identity(4, "B", "E").unwrap();
    let f = forgetfulness_deficit(&ch, 4, 50, 2).unwrap();
    assert!(f.lower_bound < 1e-8);
}

#[test]
fn n_alpha_beyond_capacity_does_not_forget() {
    let f = forgetfulness_deficit(&n_alpha(13), 16, 40, 3).unwrap();
    assert!(f.lower_bound >= FORGET16, "{}", f.lower_bound);
    assert!(f.lower_bound <= 2.0);
    assert_eq!(f.fixed_state.nrows(), 2);
}

#[test]
fn forgetfulness_is_monotone_in_k() {
    let ch = n_alpha(17);
    let vals: Vec<f64> = [1, 2, 4, 8, 16]
        .iter()
        .map(|&k| forgetfulness_deficit(&ch, k, 40, 5).unwrap().lower_bound)
        .collect();
    for w in vals.windows(2) {
        assert!(w[1] >= w[0], "{vals:?}");
    }
}

#[test]
fn k_above_input_dimension_is_rejected() {
    assert!(forgetfulness_deficit(&n_alpha(1), 17, 10, 0).is_err());
    assert!(verify_duality(&n_alpha(1), 17, 2, 0).is_err());
}

fn bell(a: &str, b: &str) -> State {
    MultipartiteState::max_entangled(a, b, 2).unwrap()
}

#[test]
fn decoupling_of_simple_states() {
    let prod = common::ket("R", 2, 0).tensor_with(&common::ket("E", 2, 1)).unwrap();
    assert_abs_diff_eq!(decoupling_check(&prod, &["R"], &["E"]).unwrap(), 0.0, epsilon = 1e-12);
    let m = CMat::from_fn(4, 4, |i, j| if i == j && (i == 0 || i == 3) { c(0.5, 0.0) } else { c(0.0, 0.0) });
    let cl = State::mixed(vec![label("R", 2), label("E", 2)], m).unwrap();
    assert_abs_diff_eq!(decoupling_check(&cl, &["R"], &["E"]).unwrap(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(decoupling_check(&bell("R", "E"), &["R"], &["E"]).unwrap(), 1.5, epsilon = 1e-12);
    assert!(decoupling_check(&bell("R", "E"), &["R"], &["X"]).is_err());
}

#[test]
fn noiseless_channel_duality() {
    let ch = Channel::identity(4, "B", "E").unwrap();
    for k in [1, 2, 4] {
        let rep = verify_duality(&ch, k, 5, 1).unwrap();
        assert!(rep.points.iter().all(|p| (p.fidelity - 1.0).abs() < 1e-10 && p.deficit < 1e-10));
        assert!(rep.forgetfulness.lower_bound < 1e-8);
        assert!(rep.checks.all());
    }
}

#[test]
fn duality_at_and_beyond_capacity() {
    let ch = n_alpha(19);
    let small = verify_duality(&ch, 4, 30, 2).unwrap();
    let large = verify_duality(&ch, 16, 3, 2).unwrap();
    assert!(small.checks.all() && large.checks.all());
    assert_eq!(small.points[0].subspace_kind, SubspaceKind::Computational);
    assert!(small.points[1..].iter().all(|p| p.subspace_kind == SubspaceKind::Haar));
    assert!(small.min_fidelity() >= F4);
    assert!(large.min_fidelity() <= F16);
    assert!(large.max_deficit() > small.max_deficit());
    assert!(large.forgetfulness.lower_bound >= FORGET16);
    assert!(!large.all_decoded());
    // the envelope is the running max of infidelity in deficit order
    for w in small.envelope.windows(2) {
        assert!(w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
    }
    assert_abs_diff_eq!(small.envelope_at(f64::INFINITY), 1.0 - small.min_fidelity(), epsilon = 1e-15);
}

#[test]
fn duality_deficit_matches_decoupling_check() {
    // second route: push a maximally entangled state through the channel
    let ch = n_alpha(23);
    let rep = verify_duality(&ch, 4, 4, 9).unwrap();
    for p in &rep.points {
        let basis = if p.trial == 0 { first_k(16, 4) } else { haar_frame(16, 4, p.seed) };
        let phi = MultipartiteState::max_entangled("A", "R", 4).unwrap();
        let embed = phi.apply_operator("A", &basis, &[label("A", 16)]).unwrap();
        let out = ch.apply(&embed, "A").unwrap();
        let d = decoupling_check(&out, &["R"], &["E"]).unwrap();
        assert_abs_diff_eq!(d, p.deficit, epsilon = 1e-10);
    }
}

#[test]
fn duality_points_serialize_with_expected_columns() {
    let rep = verify_duality(&Channel::identity(2, "B", "E").unwrap(), 1, 1, 0).unwrap();
    let v = serde_json::to_value(rep.points[0]).unwrap();
    for key in ["trial", "k", "subspaceKind", "fidelity", "deficit", "seed"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["subspaceKind"], "computational");
}

#[test]
fn f32_decode_agrees_with_f64() {
    let ch64 = n_alpha(29);
    let ch32 = make_n_alpha::<f32>(16, 8, 2, 29).unwrap().0;
    let b64 = first_k(16, 4);
    let b32 = CMat::<f32>::identity(16, 4);
    let f64v = decode_subspace(&ch64, &b64).unwrap().fidelity;
    let f32v = decode_subspace(&ch32, &b32).unwrap().fidelity as f64;
    assert!((f64v - f32v).abs() < 1e-3, "{f64v} vs {f32v}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn proven_bounds_hold_per_subspace(seed in 0u64..1000, k in 1usize..=8) {
        let ch = n_alpha(seed);
        let rep = verify_duality(&ch, k, 3, seed).unwrap();
        prop_assert!(rep.checks.decoding_bound);
        prop_assert!(rep.checks.decoupling_bound);
        prop_assert!(rep.checks.forgetfulness_floor);
        for p in &rep.points {
            prop_assert!((0.0..=1.0 + 1e-9).contains(&p.fidelity));
            prop_assert!((0.0..=2.0 + 1e-9).contains(&p.deficit));
        }
    }

    #[test]
    fn decode_fidelity_at_least_squared_overlap(seed in 0u64..1000, k in 1usize..=16) {
        let ch = n_alpha(seed);
        let dec = decode_subspace(&ch, &haar_frame(16, k, seed + 1)).unwrap();
        prop_assert!(dec.fidelity >= dec.overlap * dec.overlap - 1e-9);
    }
}
