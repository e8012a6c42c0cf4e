#![allow(dead_code)]

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use orbent::fock::{Matrix16, TwoOrbitalState, C64};
use orbent::random::{rng, SeededRng};

pub fn complex_normal(r: &mut SeededRng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

/// Full-rank random state `G G† / Tr` with Gaussian `G`.
pub fn random_state(seed: u64) -> TwoOrbitalState {
    let mut r = rng(seed);
    let g = Matrix16::from_fn(|_, _| complex_normal(&mut r));
    let m = g * g.adjoint();
    let tr = m.trace();
    TwoOrbitalState::new(m / tr).unwrap()
}

/// Random rank-`k` state.
pub fn random_low_rank_state(seed: u64, k: usize) -> TwoOrbitalState {
    let mut r = rng(seed);
    let g = nalgebra::DMatrix::from_fn(16, k, |_, _| complex_normal(&mut r));
    let m = &g * g.adjoint();
    let tr = m.trace();
    TwoOrbitalState::from_dmatrix(&(m / tr)).unwrap()
}

pub fn random_pure(seed: u64, dim: usize) -> DVector<C64> {
    let mut r = rng(seed);
    let v = DVector::from_fn(dim, |_, _| complex_normal(&mut r));
    let n = v.norm();
    v / C64::new(n, 0.0)
}
