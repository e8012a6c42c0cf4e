use crate::error::LatticeError;

use super::{ChainSpec, MAX_SECTOR_DIM};

/// Fixed-`(N↑, N↓)` configurations. Bit `i` of a species configuration is
/// the occupation of site `i`; the state index is `i_up · n_dn_configs + i_dn`.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    sites: usize,
    up: Vec<u32>,
    dn: Vec<u32>,
    rank_up: Vec<u32>,
    rank_dn: Vec<u32>,
}

fn configurations(sites: usize, n: usize) -> (Vec<u32>, Vec<u32>) {
    let configs: Vec<u32> = (0u32..1 << sites).filter(|c| c.count_ones() as usize == n).collect();
    let mut rank = vec![u32::MAX; 1 << sites];
    for (k, &c) in configs.iter().enumerate() {
        rank[c as usize] = k as u32;
    }
    (configs, rank)
}

impl SectorBasis {
    pub fn new(spec: &ChainSpec) -> Result<Self, LatticeError> {
        spec.validate()?;
        let dim = binomial(spec.sites, spec.n_up).saturating_mul(binomial(spec.sites, spec.n_dn));
        if dim > MAX_SECTOR_DIM {
            return Err(LatticeError::SectorTooLarge {
                dim,
                budget: MAX_SECTOR_DIM,
            });
        }
        let (up, rank_up) = configurations(spec.sites, spec.n_up);
        let (dn, rank_dn) = configurations(spec.sites, spec.n_dn);
        Ok(Self {
            sites: spec.sites,
            up,
            dn,
            rank_up,
            rank_dn,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.up.len() * self.dn.len()
    }

    pub fn up_configs(&self) -> &[u32] {
        &self.up
    }

    pub fn dn_configs(&self) -> &[u32] {
        &self.dn
    }

    pub fn index(&self, up: u32, dn: u32) -> Option<usize> {
        let iu = *self.rank_up.get(up as usize)?;
        let id = *self.rank_dn.get(dn as usize)?;
        if iu == u32::MAX || id == u32::MAX {
            return None;
        }
        Some(iu as usize * self.dn.len() + id as usize)
    }

    pub fn rank_up(&self, up: u32) -> Option<usize> {
        self.rank_up
            .get(up as usize)
            .filter(|&&r| r != u32::MAX)
            .map(|&r| r as usize)
    }

    pub fn rank_dn(&self, dn: u32) -> Option<usize> {
        self.rank_dn
            .get(dn as usize)
            .filter(|&&r| r != u32::MAX)
            .map(|&r| r as usize)
    }

    /// `(up, dn)` configurations of a state index.
    pub fn configuration(&self, index: usize) -> (u32, u32) {
        (self.up[index / self.dn.len()], self.dn[index % self.dn.len()])
    }

    /// Interleaved mode mask `(0↑, 0↓, 1↑, 1↓, …)` and the sign relating the
    /// species-ordered product `Π c†_{i↑} Π c†_{j↓}|0⟩` to the interleaved one.
    pub fn interleave(&self, up: u32, dn: u32) -> (u64, f64) {
        let mut mask = 0u64;
        let mut swaps = 0u32;
        for i in 0..self.sites {
            if up >> i & 1 == 1 {
                mask |= 1 << (2 * i);
            }
            if dn >> i & 1 == 1 {
                mask |= 1 << (2 * i + 1);
                // The down operator of site i moves left past every up
                // operator on sites beyond i.
                swaps += (up >> (i + 1)).count_ones();
            }
        }
        (mask, if swaps.is_multiple_of(2) { 1.0 } else { -1.0 })
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    #[test]
    fn sector_size_and_bijection() {
        let spec = ChainSpec::half_filled(6, Boundary::Open, 1.0, 0.0, 0.0);
        let b = SectorBasis::new(&spec).unwrap();
        assert_eq!(b.dim(), 400);
        for k in 0..b.dim() {
            let (u, d) = b.configuration(k);
            assert_eq!(b.index(u, d), Some(k));
        }
        assert!(b.up_configs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn interleaving_sign() {
        let spec = ChainSpec::half_filled(2, Boundary::Open, 1.0, 0.0, 0.0);
        let b = SectorBasis::new(&spec).unwrap();
        // c†_{0↑} c†_{1↑} c†_{0↓} → c†_{0↑} c†_{0↓} c†_{1↑}: one swap.
        assert_eq!(b.interleave(0b11, 0b01), (0b0111, -1.0));
        assert_eq!(b.interleave(0b01, 0b10), (0b1001, 1.0));
    }

    #[test]
    fn oversized_sector_is_rejected() {
        let spec = ChainSpec {
            sites: 16,
            ..ChainSpec::half_filled(14, Boundary::Open, 1.0, 0.0, 0.0)
        };
        assert!(matches!(SectorBasis::new(&spec), Err(LatticeError::InvalidChain(_))));
    }
}
