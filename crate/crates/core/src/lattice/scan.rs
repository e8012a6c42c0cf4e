use rayon::prelude::*;
use serde::Serialize;

use super::natural::to_natural_orbitals;
use super::rdm::pair_block;
use super::{ground_state, two_orbital_rdm, Boundary, ChainSpec, GroundState, Hamiltonian, SolverOptions};
use crate::entanglement::{
    entanglement, entanglement_with_fallback, seniority_cost, EntanglementOptions, SeniorityCost,
};
use crate::error::LatticeError;
use crate::fock::TwoOrbitalState;
use crate::ssr::Ssr;

#[derive(Debug, Clone, Serialize)]
pub struct DimerAnalytics {
    pub u: f64,
    pub v: f64,
    pub t_hop: f64,
    pub energy: f64,
    /// `((U+V) − √((U−V)² + 16 t²)) / 2`.
    pub energy_exact: f64,
    pub e_nssr: f64,
    pub e_pssr: f64,
    /// Diagonal of the reduced state in the N-SSR symmetry basis.
    pub p: [f64; 16],
}

pub fn dimer_energy(u: f64, v: f64, t_hop: f64) -> f64 {
    ((u + v) - ((u - v).powi(2) + 16.0 * t_hop * t_hop).sqrt()) / 2.0
}

pub fn dimer(u: f64, v: f64, t_hop: f64) -> Result<DimerAnalytics, LatticeError> {
    let spec = ChainSpec::half_filled(2, Boundary::Open, t_hop, u, v);
    let ham = Hamiltonian::new(&spec)?;
    let gs = ground_state(&ham, &SolverOptions::default())?;
    let rho = two_orbital_rdm(ham.basis(), &gs, 0, 1)?;
    let opts = EntanglementOptions::default();
    let n = entanglement(&rho, Ssr::N, &opts)?;
    let p = entanglement(&rho, Ssr::P, &opts)?;
    Ok(DimerAnalytics {
        u,
        v,
        t_hop,
        energy: gs.energy,
        energy_exact: dimer_energy(u, v, t_hop),
        e_nssr: n.value,
        e_pssr: p.value,
        p: n.p,
    })
}

/// Ground state and sector of one chain.
pub struct SolvedChain {
    pub hamiltonian: Hamiltonian,
    pub ground: GroundState,
}

impl SolvedChain {
    pub fn new(spec: &ChainSpec, options: &SolverOptions) -> Result<Self, LatticeError> {
        let hamiltonian = Hamiltonian::new(spec)?;
        let ground = ground_state(&hamiltonian, options)?;
        Ok(Self { hamiltonian, ground })
    }

    pub fn rdm(&self, i: usize, j: usize) -> Result<TwoOrbitalState, LatticeError> {
        two_orbital_rdm(self.hamiltonian.basis(), &self.ground, i, j)
    }

    pub fn bond_entanglement(
        &self,
        i: usize,
        j: usize,
        ssr: Ssr,
        options: &EntanglementOptions,
    ) -> Result<f64, LatticeError> {
        Ok(entanglement_with_fallback(&self.rdm(i, j)?, ssr, options)?.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BondRow {
    pub u: f64,
    pub v: f64,
    /// Bond `(pivot − 1, pivot)`.
    pub e_left: f64,
    /// Bond `(pivot, pivot + 1)`.
    pub e_right: f64,
    /// The bond starting on an even site, which the open edge makes strong.
    pub e_strong: f64,
    pub e_weak: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BondScanConfig {
    pub sites: usize,
    pub pivot: usize,
    pub t_hop: f64,
    pub ssr: Ssr,
}

/// Entanglement of the two bonds sharing `pivot` on a half-filled open
/// chain, for every `(U, V)` grid point. Rows come back in grid order.
pub fn bond_scan(
    config: &BondScanConfig,
    grid: &[(f64, f64)],
    solver: &SolverOptions,
    options: &EntanglementOptions,
) -> Result<Vec<BondRow>, LatticeError> {
    let BondScanConfig {
        sites,
        pivot,
        t_hop,
        ssr,
    } = *config;
    if sites % 2 != 0 {
        return Err(LatticeError::InvalidChain(format!(
            "bond scans need an even chain (got {sites} sites)"
        )));
    }
    if pivot == 0 || pivot + 1 >= sites {
        return Err(LatticeError::SiteOutOfRange { index: pivot, sites });
    }
    grid.par_iter()
        .map(|&(u, v)| {
            let spec = ChainSpec::half_filled(sites, Boundary::Open, t_hop, u, v);
            let chain = SolvedChain::new(&spec, solver)?;
            let e_left = chain.bond_entanglement(pivot - 1, pivot, ssr, options)?;
            let e_right = chain.bond_entanglement(pivot, pivot + 1, ssr, options)?;
            let (e_strong, e_weak) = if pivot % 2 == 0 {
                (e_right, e_left)
            } else {
                (e_left, e_right)
            };
            Ok(BondRow {
                u,
                v,
                e_left,
                e_right,
                e_strong,
                e_weak,
                delta: e_strong - e_weak,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitalBasis {
    Site,
    Natural,
}

/// Pair RDMs of every orbital pair `i < j`, in site or natural orbitals.
pub fn all_pair_rdms(chain: &SolvedChain, orbitals: OrbitalBasis) -> Result<Vec<TwoOrbitalState>, LatticeError> {
    let basis = chain.hamiltonian.basis();
    if chain.ground.is_degenerate() {
        return Err(LatticeError::DegenerateGroundState(chain.ground.degeneracy));
    }
    let psi = match orbitals {
        OrbitalBasis::Site => chain.ground.vector.clone(),
        OrbitalBasis::Natural => to_natural_orbitals(basis, &chain.ground.vector).0,
    };
    let l = basis.sites();
    let mut out = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            let m = pair_block(basis, &psi, i, j);
            let sym = crate::fock::Matrix16::from_fn(|r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
            out.push(TwoOrbitalState::new(sym).map_err(|e| LatticeError::InvalidChain(format!("reduced state: {e}")))?);
        }
    }
    Ok(out)
}

pub fn chain_seniority_cost(
    chain: &SolvedChain,
    orbitals: OrbitalBasis,
    ssr: Ssr,
    options: &EntanglementOptions,
) -> Result<SeniorityCost, LatticeError> {
    Ok(seniority_cost(&all_pair_rdms(chain, orbitals)?, ssr, options))
}
