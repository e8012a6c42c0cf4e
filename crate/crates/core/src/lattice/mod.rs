//! Exact diagonalization of small extended-Hubbard chains
//! `H = −t Σ (c†_{iσ} c_{i+1,σ} + h.c.) + U Σ n_{i↑} n_{i↓} + V Σ n_i n_{i+1}`.

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

pub mod basis;
pub mod hamiltonian;
pub mod natural;
pub mod rdm;
pub mod scan;
pub mod solver;

pub use basis::SectorBasis;
pub use hamiltonian::Hamiltonian;
pub use rdm::{spin_squared, two_orbital_rdm, two_orbital_rdm_mixture};
pub use scan::{bond_scan, dimer, BondRow, DimerAnalytics};
pub use solver::{ground_state, GroundState, SolverOptions};

pub const MAX_SITES: usize = 14;
pub const MAX_SECTOR_DIM: usize = 12_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(Self::Open),
            "periodic" => Ok(Self::Periodic),
            other => Err(format!("unknown boundary {other:?} (expected open or periodic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub sites: usize,
    pub n_up: usize,
    pub n_dn: usize,
    pub boundary: Boundary,
    pub t_hop: f64,
    pub u: f64,
    pub v: f64,
}

impl ChainSpec {
    pub fn half_filled(sites: usize, boundary: Boundary, t_hop: f64, u: f64, v: f64) -> Self {
        Self {
            sites,
            n_up: sites / 2,
            n_dn: sites / 2,
            boundary,
            t_hop,
            u,
            v,
        }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let bad = |msg: String| Err(LatticeError::InvalidChain(msg));
        if self.sites < 2 || self.sites > MAX_SITES {
            return bad(format!("{} sites outside 2..={MAX_SITES}", self.sites));
        }
        if self.n_up > self.sites || self.n_dn > self.sites {
            return bad(format!(
                "({}, {}) particles on {} sites",
                self.n_up, self.n_dn, self.sites
            ));
        }
        if self.boundary == Boundary::Periodic && self.sites < 3 {
            return bad("a periodic chain needs at least 3 sites".into());
        }
        if ![self.t_hop, self.u, self.v].iter().all(|x| x.is_finite()) {
            return bad("non-finite coupling".into());
        }
        Ok(())
    }

    /// Nearest-neighbour bonds `(i, i+1)`, plus `(L−1, 0)` when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<(usize, usize)> = (0..self.sites - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((self.sites - 1, 0));
        }
        bonds
    }
}
