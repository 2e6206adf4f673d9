#![allow(dead_code)]

use alphamerge::hilbert::{complex_gaussian, label, linalg, CMat, CVec};
use alphamerge::rng;
use alphamerge::State;
use nalgebra::Complex;

pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

pub fn random_mixed(names: &[(&str, usize)], rank: usize, seed: u64) -> State {
    let d: usize = names.iter().map(|x| x.1).product();
    let g: CMat<f64> = complex_gaussian(d, rank, &mut rng::stream(seed, 0));
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    State::mixed(names.iter().map(|(n, d)| label(n, *d)).collect(), m / c(tr, 0.0)).unwrap()
}

pub fn random_pure(names: &[(&str, usize)], seed: u64) -> State {
    let d: usize = names.iter().map(|x| x.1).product();
    let g: CMat<f64> = complex_gaussian(d, 1, &mut rng::stream(seed, 1));
    let v: CVec<f64> = g.column(0).into_owned();
    let n = v.norm();
    State::pure(names.iter().map(|(n, d)| label(n, *d)).collect(), v / c(n, 0.0)).unwrap()
}

pub fn diag_state(name: &str, p: &[f64]) -> State {
    let m = CMat::from_diagonal(&CVec::from_iterator(p.len(), p.iter().map(|&x| c(x, 0.0))));
    State::mixed(vec![label(name, p.len())], m).unwrap()
}

pub fn ket(name: &str, d: usize, i: usize) -> State {
    State::basis(vec![label(name, d)], i).unwrap()
}
