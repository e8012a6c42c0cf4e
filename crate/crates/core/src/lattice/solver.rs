use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Hamiltonian;
use crate::error::LatticeError;

/// Reductions are split into fixed-size chunks whose partial sums are added
/// in order, so dot products are independent of the thread count.
const CHUNK: usize = 4096;

/// Memory allowed for the Krylov basis.
const KRYLOV_BYTES: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Seed of the Lanczos start vector.
    pub seed: u64,
    /// Target residual `‖Hψ − Eψ‖`.
    pub residual_tol: f64,
    /// Largest residual still accepted when the target stagnates.
    pub residual_accept: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Below this dimension the sector is diagonalized densely.
    pub dense_below: usize,
    /// Eigenvalues closer than this to `E₀` count as degenerate.
    pub degeneracy_gap: f64,
    /// Upper bound on the reported degeneracy.
    pub max_manifold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            residual_tol: 1e-12,
            residual_accept: 1e-8,
            krylov_dim: 80,
            max_restarts: 200,
            dense_below: 2000,
            degeneracy_gap: 1e-10,
            max_manifold: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub energy: f64,
    #[serde(skip)]
    pub vector: Vec<f64>,
    /// Number of eigenvalues within the degeneracy gap of `energy`.
    pub degeneracy: usize,
    pub residual: f64,
    /// Distance to the next eigenvalue outside the degenerate manifold.
    pub gap: Option<f64>,
    /// Orthonormal basis of the ground manifold; `manifold[0] == vector`.
    #[serde(skip)]
    pub manifold: Vec<Vec<f64>>,
    pub dense: bool,
}

impl GroundState {
    pub fn is_degenerate(&self) -> bool {
        self.degeneracy > 1
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().zip(x.par_iter()).for_each(|(b, a)| *b += alpha * a);
}

fn scale(alpha: f64, x: &mut [f64]) {
    x.par_iter_mut().for_each(|v| *v *= alpha);
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        scale(1.0 / n, x);
    }
    n
}

/// Two passes of Gram–Schmidt against every vector of `sets`.
fn orthogonalize(x: &mut [f64], sets: &[&[Vec<f64>]]) {
    for _ in 0..2 {
        for v in sets.iter().flat_map(|s| s.iter()) {
            let c = dot(v, x);
            axpy(-c, v, x);
        }
    }
}

/// Fixes the overall sign so the largest-magnitude entry is positive.
fn fix_sign(x: &mut [f64]) {
    let pivot = x
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if pivot < 0.0 {
        scale(-1.0, x);
    }
}

fn residual(ham: &Hamiltonian, x: &[f64], energy: f64) -> f64 {
    let mut hx = vec![0.0; x.len()];
    ham.apply(x, &mut hx);
    axpy(-energy, x, &mut hx);
    dot(&hx, &hx).sqrt()
}

struct Eigenpair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

/// Lowest eigenpair of `H` restricted to the complement of `deflate`, by
/// explicitly restarted Lanczos with full reorthogonalization.
fn lanczos(
    ham: &Hamiltonian,
    deflate: &[Vec<f64>],
    start: Vec<f64>,
    options: &SolverOptions,
) -> Result<Eigenpair, LatticeError> {
    let dim = ham.dim();
    let free = dim - deflate.len();
    let budget = (KRYLOV_BYTES / (8 * dim.max(1))).max(4);
    let m_max = options.krylov_dim.min(budget).min(free).max(1);

    let mut x = start;
    orthogonalize(&mut x, &[deflate]);
    normalize(&mut x);
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    let mut iterations = 0;
    let mut last = Eigenpair {
        value: f64::NAN,
        vector: x.clone(),
        residual: f64::INFINITY,
    };

    for _ in 0..options.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        let mut w = vec![0.0; dim];
        loop {
            let j = basis.len() - 1;
            ham.apply(&basis[j], &mut w);
            iterations += 1;
            alpha.push(dot(&basis[j], &w));
            orthogonalize(&mut w, &[deflate, &basis]);
            let b = normalize(&mut w);
            if basis.len() == m_max || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(std::mem::replace(&mut w, vec![0.0; dim]));
        }

        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let k = (0..m)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .expect("nonempty Krylov space");
        let mut ritz = vec![0.0; dim];
        for (i, v) in basis.iter().enumerate() {
            axpy(eig.eigenvectors[(i, k)], v, &mut ritz);
        }
        orthogonalize(&mut ritz, &[deflate]);
        normalize(&mut ritz);
        let value = {
            let mut hr = vec![0.0; dim];
            ham.apply(&ritz, &mut hr);
            dot(&ritz, &hr)
        };
        let res = residual(ham, &ritz, value);
        last = Eigenpair {
            value,
            vector: ritz.clone(),
            residual: res,
        };
        if res <= options.residual_tol || m < m_max {
            return Ok(last);
        }
        if res < 0.5 * best {
            best = res;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 3 && res <= options.residual_accept {
                return Ok(last);
            }
        }
        x = ritz;
    }
    if last.residual <= options.residual_accept {
        return Ok(last);
    }
    Err(LatticeError::NoConvergence {
        residual: last.residual,
        iterations,
    })
}

fn dense_ground_state(ham: &Hamiltonian, options: &SolverOptions) -> GroundState {
    let eig = SymmetricEigen::new(ham.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let within = order
        .iter()
        .take_while(|&&k| eig.eigenvalues[k] - e0 < options.degeneracy_gap)
        .count();
    let gap = order.get(within).map(|&k| eig.eigenvalues[k] - e0);
    let manifold: Vec<Vec<f64>> = order[..within.min(options.max_manifold)]
        .iter()
        .map(|&k| {
            let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            fix_sign(&mut v);
            v
        })
        .collect();
    let vector = manifold[0].clone();
    GroundState {
        energy: e0,
        residual: residual(ham, &vector, e0),
        vector,
        degeneracy: within,
        gap,
        manifold,
        dense: true,
    }
}

/// Lowest eigenpair of the sector Hamiltonian.
pub fn ground_state(ham: &Hamiltonian, options: &SolverOptions) -> Result<GroundState, LatticeError> {
    let dim = ham.dim();
    if dim < options.dense_below {
        return Ok(dense_ground_state(ham, options));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut fresh = || -> Vec<f64> { (0..dim).map(|_| rng.random::<f64>() - 0.5).collect() };

    let first = lanczos(ham, &[], fresh(), options)?;
    let e0 = first.value;
    let mut v0 = first.vector;
    fix_sign(&mut v0);
    let mut manifold = vec![v0];
    let mut worst = first.residual;
    let mut gap = None;
    while manifold.len() < options.max_manifold.min(dim) {
        let next = lanczos(ham, &manifold, fresh(), options)?;
        if next.value - e0 >= options.degeneracy_gap {
            gap = Some(next.value - e0);
            break;
        }
        worst = worst.max(next.residual);
        let mut v = next.vector;
        fix_sign(&mut v);
        manifold.push(v);
    }
    Ok(GroundState {
        energy: e0,
        vector: manifold[0].clone(),
        degeneracy: manifold.len(),
        residual: worst,
        gap,
        manifold,
        dense: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Boundary, ChainSpec};

    fn open_chain_levels(sites: usize) -> Vec<f64> {
        let mut e: Vec<f64> = (1..=sites)
            .map(|k| -2.0 * (std::f64::consts::PI * k as f64 / (sites + 1) as f64).cos())
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn dimer_hopping_only() {
        let spec = ChainSpec::half_filled(2, Boundary::Open, 1.0, 0.0, 0.0);
        let gs = ground_state(&Hamiltonian::new(&spec).unwrap(), &SolverOptions::default()).unwrap();
        assert!((gs.energy + 2.0).abs() < 1e-12);
        assert_eq!(gs.degeneracy, 1);
    }

    #[test]
    fn dimer_secular_equation() {
        for u in [0.5, 4.0, 20.0] {
            let spec = ChainSpec::half_filled(2, Boundary::Open, 1.0, u, 0.0);
            let gs = ground_state(&Hamiltonian::new(&spec).unwrap(), &SolverOptions::default()).unwrap();
            assert!((gs.energy - (u - (u * u + 16.0f64).sqrt()) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn atomic_limit_picks_lowest_diagonal() {
        let spec = ChainSpec::half_filled(4, Boundary::Open, 0.0, 1.0, 3.0);
        let ham = Hamiltonian::new(&spec).unwrap();
        let gs = ground_state(&ham, &SolverOptions::default()).unwrap();
        let min = ham.diagonal().iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(gs.energy, min);
    }

    #[test]
    fn lanczos_matches_free_fermion_energy() {
        let spec = ChainSpec::half_filled(8, Boundary::Open, 1.0, 0.0, 0.0);
        let ham = Hamiltonian::new(&spec).unwrap();
        let options = SolverOptions {
            dense_below: 0,
            ..SolverOptions::default()
        };
        let gs = ground_state(&ham, &options).unwrap();
        let exact: f64 = 2.0 * open_chain_levels(8)[..4].iter().sum::<f64>();
        assert!((gs.energy - exact).abs() < 1e-10, "{} vs {exact}", gs.energy);
        assert!(gs.residual < 1e-8);
        assert_eq!(gs.degeneracy, 1);
        assert!((dot(&gs.vector, &gs.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let spec = ChainSpec::half_filled(6, Boundary::Open, 1.0, 4.0, 1.0);
        let ham = Hamiltonian::new(&spec).unwrap();
        let dense = ground_state(&ham, &SolverOptions::default()).unwrap();
        let sparse = ground_state(
            &ham,
            &SolverOptions {
                dense_below: 0,
                ..SolverOptions::default()
            },
        )
        .unwrap();
        assert!(dense.dense && !sparse.dense);
        assert!((dense.energy - sparse.energy).abs() < 1e-11);
        let overlap = dot(&dense.vector, &sparse.vector);
        assert!((overlap - 1.0).abs() < 1e-10);
        assert!((dense.gap.unwrap() - sparse.gap.unwrap()).abs() < 1e-8);
    }

    #[test]
    fn degenerate_ground_state_is_flagged() {
        // Atomic limit: the two doublon-free configurations are degenerate.
        let spec = ChainSpec::half_filled(2, Boundary::Open, 0.0, 1.0, 0.0);
        let ham = Hamiltonian::new(&spec).unwrap();
        let dense = ground_state(&ham, &SolverOptions::default()).unwrap();
        assert!(dense.is_degenerate());
        let sparse = ground_state(
            &ham,
            &SolverOptions {
                dense_below: 0,
                ..SolverOptions::default()
            },
        )
        .unwrap();
        assert_eq!(dense.degeneracy, 2);
        assert_eq!(sparse.degeneracy, 2);
    }
}
