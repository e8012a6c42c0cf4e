//! Seeded random spectra and states used by the verification batches.

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution, Exp1, StandardNormal};
use serde::Serialize;

use crate::entanglement::SectorSpectrum;
use crate::fock::{BasisVariant, FockSpace, ManyOrbitalState, SymmetryEigenbasis, TwoOrbitalState, C64};
use crate::ssr::{twirl, FormulaVariant, Generator};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Zero-based positions of the sectors that can host entanglement.
const M: [usize; 4] = [7, 8, 9, 10];
const M_PRIME: [usize; 4] = [5, 6, 0, 15];

fn dirichlet<const N: usize>(rng: &mut SeededRng, alpha: [f64; N]) -> [f64; N] {
    Dirichlet::new(alpha).expect("positive concentrations").sample(rng)
}

fn concentrations(rng: &mut SeededRng) -> [f64; 4] {
    // The pair state gets a larger concentration so that both entangled and
    // separable draws are common.
    let mut a: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.5..3.0));
    a[0] *= 3.0;
    a
}

/// Diagonal weights for one formula variant, in the basis that variant uses.
/// Every weight is positive, and the equalities of the symmetric variants
/// hold exactly.
pub fn random_weights(rng: &mut SeededRng, variant: FormulaVariant) -> [f64; 16] {
    let sectors: &[[usize; 4]] = match variant {
        FormulaVariant::NssrSinglet | FormulaVariant::NssrGeneral => &[M],
        FormulaVariant::PssrSymmetric | FormulaVariant::PssrGeneral => &[M, M_PRIME],
    };
    let sector_mass = rng.random_range(0.3..1.0);
    let share = dirichlet(rng, [2.0, 2.0]);
    let mut p = [0.0; 16];
    for (k, sector) in sectors.iter().enumerate() {
        let mass = if sectors.len() == 1 {
            sector_mass
        } else {
            sector_mass * share[k]
        };
        let alpha = concentrations(rng);
        let w = dirichlet(rng, alpha);
        for (&i, wi) in sector.iter().zip(w) {
            p[i] = mass * wi;
        }
    }
    let rest: Vec<usize> = (0..16).filter(|i| !sectors.iter().any(|s| s.contains(i))).collect();
    // Normalized exponentials are a flat Dirichlet draw of any length.
    let raw: Vec<f64> = rest.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let raw_sum: f64 = raw.iter().sum();
    for (&i, wi) in rest.iter().zip(raw) {
        p[i] = (1.0 - sector_mass) * wi / raw_sum;
    }
    let equalize = |p: &mut [f64; 16], a: usize, b: usize| {
        let mean = 0.5 * (p[a] + p[b]);
        p[a] = mean;
        p[b] = mean;
    };
    match variant {
        FormulaVariant::NssrSinglet => equalize(&mut p, 9, 10),
        FormulaVariant::PssrSymmetric => {
            equalize(&mut p, 9, 10);
            equalize(&mut p, 0, 15);
        }
        _ => {}
    }
    let total: f64 = p.iter().sum();
    p.map(|w| w / total)
}

pub fn random_spectrum(rng: &mut SeededRng, variant: FormulaVariant) -> SectorSpectrum {
    let basis = match variant.ssr() {
        crate::ssr::Ssr::N => BasisVariant::Nssr,
        crate::ssr::Ssr::P => BasisVariant::Pssr,
    };
    SectorSpectrum::from_weights(basis, random_weights(rng, variant)).expect("normalized positive weights")
}

/// A state diagonal in the parity-adapted eigenbasis: it commutes with N̂,
/// Ŝᶻ, S⃗² and the orbital reflection-parity pairs, so every formula applies.
pub fn random_symmetric_state(rng: &mut SeededRng) -> TwoOrbitalState {
    let variant = if rng.random_bool(0.5) {
        FormulaVariant::PssrGeneral
    } else {
        FormulaVariant::PssrSymmetric
    };
    let p = random_weights(rng, variant);
    TwoOrbitalState::from_sector_weights(&SymmetryEigenbasis::new(BasisVariant::Pssr), &p)
        .expect("diagonal state is valid")
}

fn complex_normal(rng: &mut SeededRng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random single-orbital state commuting with the local particle number.
pub fn random_local_state(rng: &mut SeededRng) -> Matrix4<C64> {
    let mut m = Matrix4::<C64>::zeros();
    let blocks: [&[usize]; 3] = [&[0], &[1, 2], &[3]];
    let weights = dirichlet(rng, [1.0, 1.0, 1.0]);
    for (block, w) in blocks.iter().zip(weights) {
        let n = block.len();
        let g = DMatrix::from_fn(n, n, |_, _| complex_normal(rng));
        let mut b = &g * g.adjoint();
        let tr: C64 = b.trace();
        b /= tr;
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                m[(i, j)] = b[(r, c)] * w;
            }
        }
    }
    m
}

/// Mixture of `terms` random product states, twirled by the local particle
/// numbers and by Ŝᶻ. Both twirls are averages over local unitaries, so the
/// result is separable by construction.
pub fn random_separable_symmetric(rng: &mut SeededRng, terms: usize) -> TwoOrbitalState {
    let weights: Vec<f64> = {
        let raw: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / s).collect()
    };
    let mut m = crate::fock::Matrix16::zeros();
    for w in weights {
        let product = TwoOrbitalState::product(&random_local_state(rng), &random_local_state(rng))
            .expect("product of valid local states");
        m += product.matrix() * C64::new(w, 0.0);
    }
    let rho = TwoOrbitalState::new(m).expect("convex mixture of states");
    twirl(&twirl(&rho, Generator::LocalNumber), Generator::SpinZ)
}

/// Orthonormal basis of the `N = n`, `Sᶻ = 0`, `S⃗² = 0` subspace of
/// `n_orbitals` orbitals, as columns.
pub fn singlet_subspace(n_orbitals: usize, n: usize) -> DMatrix<f64> {
    let fock = FockSpace::new(n_orbitals);
    let all: Vec<usize> = (0..n_orbitals).collect();
    let number = fock.total_number();
    let sz = fock.spin_z(&all);
    let s2 = fock.spin_squared(&all);
    let members: Vec<usize> = (0..fock.dim())
        .filter(|&k| (number[(k, k)] - n as f64).abs() < 0.5 && sz[(k, k)].abs() < 0.25)
        .collect();
    let block = DMatrix::from_fn(members.len(), members.len(), |r, c| s2[(members[r], members[c])]);
    let eig = SymmetricEigen::new(block);
    let zero: Vec<usize> = (0..members.len())
        .filter(|&k| eig.eigenvalues[k].abs() < 1e-9)
        .collect();
    let mut out = DMatrix::zeros(fock.dim(), zero.len());
    for (col, &k) in zero.iter().enumerate() {
        for (r, &m) in members.iter().enumerate() {
            out[(m, col)] = eig.eigenvectors[(r, k)];
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomSinglet {
    pub particles: usize,
    #[serde(skip)]
    pub psi: DVector<C64>,
}

/// Random complex singlet of three orbitals with an even particle number
/// drawn from {2, 4}.
pub fn random_three_orbital_singlet(rng: &mut SeededRng) -> RandomSinglet {
    let particles = if rng.random_bool(0.5) { 2 } else { 4 };
    let basis = singlet_subspace(3, particles);
    let coeffs = DVector::from_fn(basis.ncols(), |_, _| complex_normal(rng));
    let psi = basis.map(|x| C64::new(x, 0.0)) * coeffs;
    let norm = psi.norm();
    RandomSinglet {
        particles,
        psi: psi / C64::new(norm, 0.0),
    }
}

impl RandomSinglet {
    pub fn state(&self) -> ManyOrbitalState {
        ManyOrbitalState::pure(3, self.psi.clone()).expect("64 amplitudes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::partial_trace;
    use crate::ssr::detect_symmetries;

    #[test]
    fn seeded_draws_repeat() {
        let a = random_weights(&mut rng(7), FormulaVariant::PssrGeneral);
        let b = random_weights(&mut rng(7), FormulaVariant::PssrGeneral);
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_variants_hold_their_equalities() {
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_weights(&mut r, FormulaVariant::PssrSymmetric);
            assert_eq!(p[9], p[10]);
            assert_eq!(p[0], p[15]);
            assert!(p.iter().all(|&w| w > 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singlet_subspace_dimensions() {
        // Two electrons in three orbitals: 6 spatially symmetric singlets.
        assert_eq!(singlet_subspace(3, 2).ncols(), 6);
        assert_eq!(singlet_subspace(3, 4).ncols(), 6);
        assert_eq!(singlet_subspace(2, 2).ncols(), 3);
    }

    #[test]
    fn three_orbital_singlets_reduce_to_symmetric_pairs() {
        let mut r = rng(11);
        for _ in 0..5 {
            let s = random_three_orbital_singlet(&mut r);
            let rho = partial_trace(&s.state(), 0, 2).unwrap();
            let rep = detect_symmetries(&rho, 1e-10);
            assert!(rep.spin_squared.holds && rep.spin_z.holds && rep.p10_eq_p11.holds);
        }
    }

    #[test]
    fn separable_mixtures_are_symmetric() {
        let mut r = rng(5);
        let rho = random_separable_symmetric(&mut r, 4);
        let rep = detect_symmetries(&rho, 1e-12);
        assert!(rep.spin_z.holds && rep.number.holds);
    }
}
