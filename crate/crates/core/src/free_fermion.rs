//! Two-site reduced states of the spinful free-electron chain.

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use crate::entanglement::{nssr_entanglement_singlet, sector_spectrum, SectorSpectrum};
use crate::error::FreeFermionError;
use crate::fock::{BasisVariant, Matrix16, SymmetryEigenbasis, TwoOrbitalState, C64};
use crate::lattice::Boundary;
use crate::ssr::nssr_project;

/// Per-spin filling `η ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FillingFraction(f64);

impl FillingFraction {
    pub fn new(eta: f64) -> Result<Self, FreeFermionError> {
        if eta > 0.0 && eta < 1.0 {
            Ok(Self(eta))
        } else {
            Err(FreeFermionError::Filling(eta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `⟨f†_{i,σ} f_{i+l,σ}⟩` in the infinite Fermi sea: `η` at `l = 0`,
/// `sin(πηl)/(πl)` otherwise.
pub fn correlation(eta: f64, l: usize) -> Result<f64, FreeFermionError> {
    let eta = FillingFraction::new(eta)?.value();
    if l == 0 {
        return Ok(eta);
    }
    let x = std::f64::consts::PI * l as f64;
    Ok((x * eta).sin() / x)
}

/// Per-spin one-particle correlations `C_ij = ⟨f†_{iσ} f_{jσ}⟩` on a list
/// of sites, identical for both spin species.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub sites: Vec<usize>,
    pub per_spin: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Two sites at distance `l` in the infinite chain.
    pub fn two_site(eta: f64, l: usize) -> Result<Self, FreeFermionError> {
        if l == 0 {
            return Err(FreeFermionError::ZeroDistance);
        }
        let n = correlation(eta, 0)?;
        let c = correlation(eta, l)?;
        Ok(Self {
            sites: vec![0, l],
            per_spin: DMatrix::from_row_slice(2, 2, &[n, c, c, n]),
        })
    }

    /// Restriction of a full per-spin correlation matrix to `sites`.
    pub fn restrict(full: &DMatrix<f64>, sites: &[usize]) -> Self {
        Self {
            sites: sites.to_vec(),
            per_spin: DMatrix::from_fn(sites.len(), sites.len(), |a, b| full[(sites[a], sites[b])]),
        }
    }

    pub fn distance(&self) -> Option<usize> {
        match self.sites.as_slice() {
            [i, j] => Some(i.abs_diff(*j)),
            _ => None,
        }
    }

    /// Spin-resolved matrix in mode order `(1↑, 1↓, 2↑, 2↓, …)`.
    pub fn mode_matrix(&self) -> DMatrix<C64> {
        let n = self.sites.len();
        DMatrix::from_fn(2 * n, 2 * n, |a, b| {
            if a % 2 == b % 2 {
                C64::new(self.per_spin[(a / 2, b / 2)], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    fn block(&self) -> Matrix2<f64> {
        assert_eq!(self.sites.len(), 2, "two-site block expected");
        Matrix2::from_fn(|a, b| self.per_spin[(a, b)])
    }
}

/// Two-mode density matrix of one spin species, in the basis
/// `|0⟩, f†_A|0⟩, f†_B|0⟩, f†_A f†_B|0⟩`, from the eigenmodes of the block.
fn single_species_rdm(block: &Matrix2<f64>) -> [[f64; 4]; 4] {
    let eig = block.symmetric_eigen();
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let v = eig.eigenvectors;
    let mut rho = [[0.0; 4]; 4];
    rho[0][0] = (1.0 - l0) * (1.0 - l1);
    rho[3][3] = l0 * l1;
    for (k, weight) in [(0, l0 * (1.0 - l1)), (1, l1 * (1.0 - l0))] {
        for a in 0..2 {
            for b in 0..2 {
                rho[1 + a][1 + b] += weight * v[(a, k)] * v[(b, k)];
            }
        }
    }
    rho
}

/// Spin-unpolarized number-conserving Gaussian state of two sites, from the
/// per-spin 2×2 correlation block.
pub fn gaussian_pair_rdm(block: &Matrix2<f64>) -> Result<TwoOrbitalState, crate::error::StateError> {
    let species = single_species_rdm(block);
    // Species factors are built in order (A↑, B↑, A↓, B↓); moving A↓ past B↑
    // gives the sign (−1)^{n_{B↑} n_{A↓}}.
    let split = |index: usize| {
        let (a, b) = (index / 4, index % 4);
        let (a_up, a_dn, b_up, b_dn) = (a & 1, a >> 1, b & 1, b >> 1);
        let sign = if b_up * a_dn == 1 { -1.0 } else { 1.0 };
        (a_up + 2 * b_up, a_dn + 2 * b_dn, sign)
    };
    TwoOrbitalState::new(Matrix16::from_fn(|n, m| {
        let (un, dn, sn) = split(n);
        let (um, dm, sm) = split(m);
        C64::new(sn * sm * species[un][um] * species[dn][dm], 0.0)
    }))
}

impl CorrelationMatrix {
    pub fn pair_rdm(&self) -> Result<TwoOrbitalState, crate::error::StateError> {
        gaussian_pair_rdm(&self.block())
    }
}

pub fn two_site_rdm(eta: f64, l: usize) -> Result<TwoOrbitalState, FreeFermionError> {
    let c = CorrelationMatrix::two_site(eta, l)?;
    Ok(c.pair_rdm().expect("Gaussian construction yields a valid state"))
}

/// Closed-form N-SSR weights `(p₈, p₉, p₁₀ = p₁₁)` of the two-site state.
pub fn analytic_weights(eta: f64, l: usize) -> Result<[f64; 3], FreeFermionError> {
    if l == 0 {
        return Err(FreeFermionError::ZeroDistance);
    }
    let c = correlation(eta, l)?;
    let a = eta * (1.0 - eta) + c * c;
    let p_triplet = (eta * eta - c * c) * ((1.0 - eta).powi(2) - c * c);
    Ok([a * a + c * c, a * a - c * c, p_triplet])
}

fn pair_spectrum(rho: &TwoOrbitalState) -> SectorSpectrum {
    sector_spectrum(&nssr_project(rho), &SymmetryEigenbasis::new(BasisVariant::Nssr))
        .expect("projected state has a spectrum")
}

/// N-SSR entanglement of two sites at distance `l`, in nats.
pub fn two_site_entanglement(eta: f64, l: usize) -> Result<f64, FreeFermionError> {
    let rho = two_site_rdm(eta, l)?;
    Ok(nssr_entanglement_singlet(&pair_spectrum(&rho))?.value)
}

/// `(l, E(l))` for `l = 1..=l_max`.
pub fn entanglement_vs_distance(eta: f64, l_max: usize) -> Result<Vec<(usize, f64)>, FreeFermionError> {
    FillingFraction::new(eta)?;
    if l_max == 0 {
        return Err(FreeFermionError::ZeroDistance);
    }
    (1..=l_max).map(|l| Ok((l, two_site_entanglement(eta, l)?))).collect()
}

/// `√2 / (π η (1−η))`.
pub fn lmin_leading_order(eta: f64) -> Result<f64, FreeFermionError> {
    let eta = FillingFraction::new(eta)?.value();
    Ok(std::f64::consts::SQRT_2 / (std::f64::consts::PI * eta * (1.0 - eta)))
}

/// Smallest admissible cap, `⌈3·√2/(πη(1−η))⌉`.
pub fn minimum_l_cap(eta: f64) -> Result<usize, FreeFermionError> {
    Ok((3.0 * lmin_leading_order(eta)?).ceil() as usize)
}

/// `4·⌈√2/(πη(1−η))⌉`.
pub fn default_l_cap(eta: f64) -> Result<usize, FreeFermionError> {
    Ok(4 * lmin_leading_order(eta)?.ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisentanglingDistance {
    pub eta: f64,
    pub l_min: usize,
    pub l_cap: usize,
    pub leading_order: f64,
}

/// Smallest `l` with `E(l') = 0` for every `l'` in `[l, l_cap]`.
pub fn disentangling_distance(eta: f64, l_cap: Option<usize>) -> Result<DisentanglingDistance, FreeFermionError> {
    let leading_order = lmin_leading_order(eta)?;
    let min = minimum_l_cap(eta)?;
    let l_cap = match l_cap {
        Some(cap) => cap,
        None => default_l_cap(eta)?.max(min),
    };
    if l_cap < min {
        return Err(FreeFermionError::CapTooSmall { cap: l_cap, min });
    }
    let series = entanglement_vs_distance(eta, l_cap)?;
    let last_entangled = series.iter().rev().find(|(_, e)| *e > 0.0).map(|(l, _)| *l);
    let l_min = match last_entangled {
        Some(l) if l == l_cap => return Err(FreeFermionError::NotDisentangledWithinCap(l_cap)),
        Some(l) => l + 1,
        None => 1,
    };
    Ok(DisentanglingDistance {
        eta,
        l_min,
        l_cap,
        leading_order,
    })
}

fn open_orbital(sites: usize, k: usize, i: usize) -> f64 {
    let l1 = sites as f64 + 1.0;
    (2.0 / l1).sqrt() * (std::f64::consts::PI * (k * (i + 1)) as f64 / l1).sin()
}

/// Occupied momenta `2πk/L` of a closed-shell periodic ring.
fn ring_occupation(sites: usize, n: usize) -> Result<Vec<usize>, FreeFermionError> {
    let energy = |k: usize| -(2.0 * std::f64::consts::PI * k as f64 / sites as f64).cos();
    let mut ks: Vec<usize> = (0..sites).collect();
    ks.sort_by(|&a, &b| energy(a).total_cmp(&energy(b)).then(a.cmp(&b)));
    if n > 0 && n < sites && energy(ks[n]) - energy(ks[n - 1]) < 1e-10 {
        return Err(FreeFermionError::OpenShell { n, sites });
    }
    ks.truncate(n);
    Ok(ks)
}

/// `⟨f†_{iσ} f_{jσ}⟩` in the `n`-particle Slater determinant of a
/// `sites`-site chain with unit hopping.
pub fn finite_chain_correlation(
    sites: usize,
    n: usize,
    i: usize,
    j: usize,
    boundary: Boundary,
) -> Result<f64, FreeFermionError> {
    if n > sites {
        return Err(FreeFermionError::Overfilled { n, sites });
    }
    for index in [i, j] {
        if index >= sites {
            return Err(FreeFermionError::SiteOutOfRange { index, sites });
        }
    }
    Ok(match boundary {
        Boundary::Open => (1..=n)
            .map(|k| open_orbital(sites, k, i) * open_orbital(sites, k, j))
            .sum(),
        Boundary::Periodic => {
            let dx = i as f64 - j as f64;
            ring_occupation(sites, n)?
                .into_iter()
                .map(|k| (2.0 * std::f64::consts::PI * k as f64 * dx / sites as f64).cos())
                .sum::<f64>()
                / sites as f64
        }
    })
}

/// Full per-spin correlation matrix of the finite chain.
pub fn finite_chain_correlations(sites: usize, n: usize, boundary: Boundary) -> Result<DMatrix<f64>, FreeFermionError> {
    let mut c = DMatrix::zeros(sites, sites);
    for i in 0..sites {
        for j in 0..sites {
            c[(i, j)] = finite_chain_correlation(sites, n, i, j, boundary)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn correlator_reference_values() {
        assert!(correlation(0.5, 2).unwrap().abs() < 1e-16);
        assert!((correlation(0.5, 1).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert_eq!(correlation(0.3, 0).unwrap(), 0.3);
        assert!(correlation(1.0, 1).is_err());
        for l in 1..50 {
            assert!(correlation(0.37, l).unwrap().abs() <= 1.0 / (PI * l as f64));
        }
    }

    #[test]
    fn half_filling_neighbours_are_entangled_next_neighbours_not() {
        let e1 = two_site_entanglement(0.5, 1).unwrap();
        assert!((e1 - 0.045549554081600).abs() < 1e-12);
        assert_eq!(two_site_entanglement(0.5, 2).unwrap(), 0.0);
    }

    #[test]
    fn weights_match_closed_form() {
        for (eta, l) in [(0.5, 1), (0.2, 3), (0.8, 2)] {
            let s = pair_spectrum(&two_site_rdm(eta, l).unwrap());
            let [p8, p9, p10] = analytic_weights(eta, l).unwrap();
            assert!((s.p[7] - p8).abs() < 1e-14);
            assert!((s.p[8] - p9).abs() < 1e-14);
            assert!((s.p[9] - p10).abs() < 1e-14);
            assert!((s.p[10] - p10).abs() < 1e-14);
        }
    }

    #[test]
    fn leading_order_values() {
        assert!((lmin_leading_order(0.5).unwrap() - 4.0 * 2f64.sqrt() / PI).abs() < 1e-15);
        assert!((lmin_leading_order(0.1).unwrap() - 5.0017).abs() < 1e-4);
        assert!((lmin_leading_order(0.3).unwrap() - lmin_leading_order(0.7).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn half_filling_disentangles_at_two() {
        let d = disentangling_distance(0.5, None).unwrap();
        assert_eq!(d.l_min, 2);
        assert_eq!(d.l_cap, 8);
        assert!(matches!(
            disentangling_distance(0.5, Some(3)),
            Err(FreeFermionError::CapTooSmall { min: 6, .. })
        ));
    }

    #[test]
    fn chains_match_direct_diagonalization() {
        for (sites, n, boundary) in [
            (9, 4, Boundary::Open),
            (10, 5, Boundary::Periodic),
            (7, 3, Boundary::Periodic),
        ] {
            let mut h = DMatrix::<f64>::zeros(sites, sites);
            for i in 0..sites {
                let j = (i + 1) % sites;
                if j > i || boundary == Boundary::Periodic {
                    h[(i, j)] = -1.0;
                    h[(j, i)] = -1.0;
                }
            }
            let eig = h.symmetric_eigen();
            let mut order: Vec<usize> = (0..sites).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let occ = DMatrix::from_fn(sites, n, |i, k| eig.eigenvectors[(i, order[k])]);
            let direct = &occ * occ.transpose();
            let closed = finite_chain_correlations(sites, n, boundary).unwrap();
            assert!((closed - direct).norm() < 1e-12, "{sites} {n} {boundary:?}");
        }
    }

    #[test]
    fn periodic_open_shell_is_rejected() {
        assert!(matches!(
            finite_chain_correlations(8, 4, Boundary::Periodic),
            Err(FreeFermionError::OpenShell { .. })
        ));
        assert!(finite_chain_correlations(10, 5, Boundary::Periodic).is_ok());
    }

    #[test]
    fn long_chain_approaches_fermi_sea() {
        let c = finite_chain_correlation(2000, 1000, 1000, 1001, Boundary::Open).unwrap();
        assert!((c - 1.0 / PI).abs() < 1e-3);
    }
}
