use nalgebra::DMatrix;
use rayon::prelude::*;

use super::basis::SectorBasis;
use super::ChainSpec;
use crate::error::LatticeError;

/// Off-diagonal moves of one spin species: `(target config rank, amplitude)`.
type HopTable = Vec<Vec<(usize, f64)>>;

/// Matrix-free Hamiltonian on one `(N↑, N↓)` sector.
///
/// Species are stored in the order (all ↑ modes, all ↓ modes) with sites
/// ascending inside each species, so a hop between neighbouring sites has no
/// string sign and the periodic wrap picks up `(−1)^{N_σ−1}`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    spec: ChainSpec,
    basis: SectorBasis,
    diagonal: Vec<f64>,
    hops_up: HopTable,
    hops_dn: HopTable,
}

fn hop_table(spec: &ChainSpec, configs: &[u32], rank: impl Fn(u32) -> Option<usize>) -> HopTable {
    configs
        .iter()
        .map(|&c| {
            let mut moves = Vec::new();
            for (i, j) in spec.bonds() {
                for (from, to) in [(i, j), (j, i)] {
                    if c >> from & 1 == 1 && c >> to & 1 == 0 {
                        let target = c ^ (1 << from) ^ (1 << to);
                        let (lo, hi) = (from.min(to), from.max(to));
                        let between = if hi > lo + 1 {
                            (c >> (lo + 1) & ((1 << (hi - lo - 1)) - 1)).count_ones()
                        } else {
                            0
                        };
                        let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
                        moves.push((rank(target).expect("hop stays in sector"), -spec.t_hop * sign));
                    }
                }
            }
            moves.sort_by_key(|m| m.0);
            moves
        })
        .collect()
}

impl Hamiltonian {
    pub fn new(spec: &ChainSpec) -> Result<Self, LatticeError> {
        let basis = SectorBasis::new(spec)?;
        let bonds = spec.bonds();
        let hops_up = hop_table(spec, basis.up_configs(), |c| basis.rank_up(c));
        let hops_dn = hop_table(spec, basis.dn_configs(), |c| basis.rank_dn(c));
        let diagonal = (0..basis.dim())
            .map(|k| {
                let (up, dn) = basis.configuration(k);
                let doublons = (up & dn).count_ones() as f64;
                let n = |i: usize| ((up >> i & 1) + (dn >> i & 1)) as f64;
                let neighbours: f64 = bonds.iter().map(|&(i, j)| n(i) * n(j)).sum();
                spec.u * doublons + spec.v * neighbours
            })
            .collect();
        Ok(Self {
            spec: *spec,
            basis,
            diagonal,
            hops_up,
            hops_dn,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `y = H x`. Each output row is accumulated in a fixed order, so the
    /// result does not depend on the thread count.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nd = self.basis.dn_configs().len();
        y.par_chunks_mut(nd).enumerate().for_each(|(iu, row)| {
            let base = iu * nd;
            for (id, out) in row.iter_mut().enumerate() {
                let k = base + id;
                let mut acc = self.diagonal[k] * x[k];
                for &(jd, a) in &self.hops_dn[id] {
                    acc += a * x[base + jd];
                }
                for &(ju, a) in &self.hops_up[iu] {
                    acc += a * x[ju * nd + id];
                }
                *out = acc;
            }
        });
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let nd = self.basis.dn_configs().len();
        let mut h = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let (iu, id) = (k / nd, k % nd);
            h[(k, k)] += self.diagonal[k];
            for &(jd, a) in &self.hops_dn[id] {
                h[(k, iu * nd + jd)] += a;
            }
            for &(ju, a) in &self.hops_up[iu] {
                h[(k, ju * nd + id)] += a;
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    #[test]
    fn dense_form_is_symmetric() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let spec = ChainSpec::half_filled(6, boundary, 1.0, 4.0, 1.5);
            let h = Hamiltonian::new(&spec).unwrap().to_dense();
            assert!((&h - h.transpose()).norm() < 1e-14);
        }
    }

    #[test]
    fn atomic_limit_is_diagonal() {
        let spec = ChainSpec::half_filled(4, Boundary::Open, 0.0, 3.0, 0.5);
        let ham = Hamiltonian::new(&spec).unwrap();
        let h = ham.to_dense();
        for k in 0..ham.dim() {
            let (up, dn) = ham.basis().configuration(k);
            let n = |i: usize| ((up >> i & 1) + (dn >> i & 1)) as f64;
            let expected = 3.0 * (up & dn).count_ones() as f64 + 0.5 * (0..3).map(|i| n(i) * n(i + 1)).sum::<f64>();
            assert_eq!(h[(k, k)], expected);
        }
        assert_eq!((h.clone() - DMatrix::from_diagonal(&h.diagonal())).norm(), 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let spec = ChainSpec::half_filled(6, Boundary::Periodic, 1.0, 2.0, 0.7);
        let ham = Hamiltonian::new(&spec).unwrap();
        let x: Vec<f64> = (0..ham.dim()).map(|k| (k as f64 * 0.731).sin()).collect();
        let mut y = vec![0.0; ham.dim()];
        ham.apply(&x, &mut y);
        let dense = ham.to_dense() * nalgebra::DVector::from_vec(x);
        for k in 0..ham.dim() {
            assert!((y[k] - dense[k]).abs() < 1e-12);
        }
    }
}
