use nalgebra::DMatrix;

use super::solver::dot;
use super::{GroundState, SectorBasis};
use crate::error::LatticeError;
use crate::fock::trace::{reduce_amplitudes, KeptSplitter};
use crate::fock::{Matrix16, TwoOrbitalState, C64};

fn check_pair(basis: &SectorBasis, i: usize, j: usize) -> Result<(), LatticeError> {
    let sites = basis.sites();
    for index in [i, j] {
        if index >= sites {
            return Err(LatticeError::SiteOutOfRange { index, sites });
        }
    }
    if i == j {
        return Err(LatticeError::SamePair(i));
    }
    Ok(())
}

/// Two-site block of a real amplitude vector, site `i` as orbital A.
pub(crate) fn pair_block(basis: &SectorBasis, psi: &[f64], i: usize, j: usize) -> DMatrix<C64> {
    let splitter = KeptSplitter::new(&[i, j], basis.sites());
    let amplitudes = psi.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(k, &a)| {
        let (up, dn) = basis.configuration(k);
        let (mask, sign) = basis.interleave(up, dn);
        (mask, C64::new(sign * a, 0.0))
    });
    reduce_amplitudes(amplitudes, &splitter)
}

fn to_state(m: &DMatrix<C64>) -> Result<TwoOrbitalState, LatticeError> {
    // The block is Hermitian by construction up to rounding in the
    // environment sums; symmetrize before validation.
    let sym = Matrix16::from_fn(|r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
    let trace: f64 = (0..16).map(|k| sym[(k, k)].re).sum();
    TwoOrbitalState::new(sym / C64::new(trace, 0.0))
        .map_err(|e| LatticeError::InvalidChain(format!("reduced state: {e}")))
}

/// Reduced state of sites `(i, j)` for a nondegenerate ground state.
pub fn two_orbital_rdm(
    basis: &SectorBasis,
    gs: &GroundState,
    i: usize,
    j: usize,
) -> Result<TwoOrbitalState, LatticeError> {
    check_pair(basis, i, j)?;
    if gs.is_degenerate() {
        return Err(LatticeError::DegenerateGroundState(gs.degeneracy));
    }
    to_state(&pair_block(basis, &gs.vector, i, j))
}

/// Reduced state of the equal-weight mixture over the ground manifold.
pub fn two_orbital_rdm_mixture(
    basis: &SectorBasis,
    gs: &GroundState,
    i: usize,
    j: usize,
) -> Result<TwoOrbitalState, LatticeError> {
    check_pair(basis, i, j)?;
    let mut sum = DMatrix::zeros(16, 16);
    for v in &gs.manifold {
        sum += pair_block(basis, v, i, j);
    }
    to_state(&sum)
}

/// `⟨S⃗²⟩ = ‖S⁺ψ‖² + Sᶻ(Sᶻ + 1)` for a state of the sector.
pub fn spin_squared(basis: &SectorBasis, psi: &[f64]) -> f64 {
    let up = basis.up_configs();
    let dn = basis.dn_configs();
    let sz = 0.5 * (up[0].count_ones() as f64 - dn[0].count_ones() as f64);
    // S⁺ = Σ c†_{i↑} c_{i↓}. In species order every up operator sits left of
    // every down operator; moving the pair through the strings gives the
    // sign (−1)^{(#up below i) + (#dn below i) + N↑}.
    let n_up = up[0].count_ones();
    let mut image: std::collections::BTreeMap<(u32, u32), f64> = std::collections::BTreeMap::new();
    for (k, &a) in psi.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let (u, d) = basis.configuration(k);
        for i in 0..basis.sites() {
            if d >> i & 1 == 1 && u >> i & 1 == 0 {
                let below = (1u32 << i) - 1;
                let count = (u & below).count_ones() + (d & below).count_ones() + n_up;
                let sign = if count.is_multiple_of(2) { 1.0 } else { -1.0 };
                *image.entry((u | 1 << i, d & !(1 << i))).or_insert(0.0) += sign * a;
            }
        }
    }
    let norm: f64 = image.values().map(|v| v * v).sum();
    norm + sz * (sz + 1.0)
}

/// `⟨ψ|φ⟩` with the solver's reproducible reduction.
pub fn overlap(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{entanglement, EntanglementOptions};
    use crate::fock::{BasisVariant, SymmetryEigenbasis};
    use crate::lattice::{ground_state, Boundary, ChainSpec, Hamiltonian, SolverOptions};
    use crate::ssr::Ssr;

    fn solve(spec: &ChainSpec) -> (Hamiltonian, GroundState) {
        let ham = Hamiltonian::new(spec).unwrap();
        let gs = ground_state(&ham, &SolverOptions::default()).unwrap();
        (ham, gs)
    }

    #[test]
    fn free_dimer_weights() {
        let (ham, gs) = solve(&ChainSpec::half_filled(2, Boundary::Open, 1.0, 0.0, 0.0));
        let rho = two_orbital_rdm(ham.basis(), &gs, 0, 1).unwrap();
        let basis = SymmetryEigenbasis::new(BasisVariant::Nssr);
        let p: Vec<f64> = (0..16)
            .map(|k| rho.matrix_element(basis.vector(k), basis.vector(k)).re)
            .collect();
        for (k, expected) in [(5, 0.25), (6, 0.25), (7, 0.5), (8, 0.0), (9, 0.0), (10, 0.0)] {
            assert!((p[k] - expected).abs() < 1e-12, "p{} = {}", k + 1, p[k]);
        }
        let e = entanglement(&rho, Ssr::N, &EntanglementOptions::default()).unwrap();
        assert!((e.value - 0.5 * std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn ground_states_are_singlets() {
        for (u, v) in [(0.0, 0.0), (4.0, 0.0), (6.0, 3.0), (2.0, 1.5)] {
            let (ham, gs) = solve(&ChainSpec::half_filled(6, Boundary::Open, 1.0, u, v));
            assert!(spin_squared(ham.basis(), &gs.vector).abs() < 1e-8);
        }
    }

    #[test]
    fn spin_squared_of_a_ferromagnet() {
        // One up and one down electron on distinct sites with t = 0 is a
        // mixture of S = 0 and S = 1; the symmetric combination is S = 1.
        let spec = ChainSpec::half_filled(2, Boundary::Open, 0.0, 1.0, 0.0);
        let basis = SectorBasis::new(&spec).unwrap();
        let mut psi = vec![0.0; basis.dim()];
        let a = basis.index(0b01, 0b10).unwrap();
        let b = basis.index(0b10, 0b01).unwrap();
        psi[a] = std::f64::consts::FRAC_1_SQRT_2;
        psi[b] = -std::f64::consts::FRAC_1_SQRT_2;
        let s2 = spin_squared(&basis, &psi);
        psi[b] = -psi[b];
        let s2_other = spin_squared(&basis, &psi);
        let mut values = [s2, s2_other];
        values.sort_by(f64::total_cmp);
        assert!(values[0].abs() < 1e-14 && (values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_ground_state_is_refused() {
        let (ham, gs) = solve(&ChainSpec::half_filled(2, Boundary::Open, 0.0, 1.0, 0.0));
        assert!(matches!(
            two_orbital_rdm(ham.basis(), &gs, 0, 1),
            Err(LatticeError::DegenerateGroundState(2))
        ));
        let mix = two_orbital_rdm_mixture(ham.basis(), &gs, 0, 1).unwrap();
        assert!((mix.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_errors() {
        let (ham, gs) = solve(&ChainSpec::half_filled(4, Boundary::Open, 1.0, 2.0, 0.0));
        assert!(matches!(
            two_orbital_rdm(ham.basis(), &gs, 1, 1),
            Err(LatticeError::SamePair(1))
        ));
        assert!(matches!(
            two_orbital_rdm(ham.basis(), &gs, 0, 4),
            Err(LatticeError::SiteOutOfRange { index: 4, sites: 4 })
        ));
    }
}
