use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};

use super::basis::modes;
use super::state::TwoOrbitalState;
use super::{Matrix16, C64};
use crate::error::FockError;

/// A pure or mixed state on `n_orbitals` spatial orbitals, indexed with
/// orbital 0 as the most significant base-4 digit.
#[derive(Debug, Clone)]
pub enum ManyOrbitalState {
    Pure { n_orbitals: usize, psi: DVector<C64> },
    Mixed { n_orbitals: usize, rho: DMatrix<C64> },
}

impl ManyOrbitalState {
    pub fn pure(n_orbitals: usize, psi: DVector<C64>) -> Result<Self, FockError> {
        check_len(psi.len(), n_orbitals)?;
        Ok(Self::Pure { n_orbitals, psi })
    }

    pub fn mixed(n_orbitals: usize, rho: DMatrix<C64>) -> Result<Self, FockError> {
        check_len(rho.nrows(), n_orbitals)?;
        check_len(rho.ncols(), n_orbitals)?;
        Ok(Self::Mixed { n_orbitals, rho })
    }

    pub fn n_orbitals(&self) -> usize {
        match self {
            Self::Pure { n_orbitals, .. } | Self::Mixed { n_orbitals, .. } => *n_orbitals,
        }
    }

    pub fn density_matrix(&self) -> DMatrix<C64> {
        match self {
            Self::Pure { psi, .. } => psi * psi.adjoint(),
            Self::Mixed { rho, .. } => rho.clone(),
        }
    }
}

fn check_len(len: usize, n_orbitals: usize) -> Result<(), FockError> {
    if n_orbitals > 12 || len != 1usize << (2 * n_orbitals) {
        return Err(FockError::Dimension { len, n_orbitals });
    }
    Ok(())
}

fn check_keep(keep: &[usize], n_orbitals: usize) -> Result<(), FockError> {
    for (k, &o) in keep.iter().enumerate() {
        if o >= n_orbitals {
            return Err(FockError::OrbitalOutOfRange { index: o, n_orbitals });
        }
        if keep[..k].contains(&o) {
            return Err(FockError::RepeatedOrbital(o));
        }
    }
    Ok(())
}

/// Mode order that puts the kept orbitals first (in the given order) and
/// the traced modes after them in ascending order.
fn kept_first_order(keep: &[usize], n_orbitals: usize) -> Vec<usize> {
    let mut order: Vec<usize> = keep.iter().flat_map(|&o| [2 * o, 2 * o + 1]).collect();
    order.extend((0..2 * n_orbitals).filter(|m| !keep.contains(&(m / 2))));
    order
}

/// Splits a configuration into the kept-orbital index, the environment
/// configuration and the sign of bringing the kept modes to the front.
#[derive(Debug, Clone)]
pub struct KeptSplitter {
    keep: Vec<usize>,
    order: Vec<usize>,
    kept_bits: u64,
}

impl KeptSplitter {
    pub fn new(keep: &[usize], n_orbitals: usize) -> Self {
        let kept_bits = keep.iter().fold(0u64, |acc, &o| acc | (3u64 << (2 * o)));
        Self {
            keep: keep.to_vec(),
            order: kept_first_order(keep, n_orbitals),
            kept_bits,
        }
    }

    pub fn kept_dim(&self) -> usize {
        1 << (2 * self.keep.len())
    }

    /// `(kept index, environment mask, sign)` for an occupation mask.
    pub fn split(&self, mask: u64) -> (usize, u64, f64) {
        let kept = self
            .keep
            .iter()
            .fold(0usize, |acc, &o| (acc << 2) | modes::local_digit(mask, o));
        let sign = if modes::reorder_is_odd(mask, &self.order) {
            -1.0
        } else {
            1.0
        };
        (kept, mask & !self.kept_bits, sign)
    }
}

/// Reduces a list of `(occupation mask, amplitude)` pairs of a pure state
/// to the kept orbitals. Masks follow the interleaved mode order.
pub fn reduce_amplitudes<I>(amplitudes: I, splitter: &KeptSplitter) -> DMatrix<C64>
where
    I: IntoIterator<Item = (u64, C64)>,
{
    let dim = splitter.kept_dim();
    let mut blocks: HashMap<u64, Vec<C64>> = HashMap::new();
    for (mask, amp) in amplitudes {
        let (kept, env, sign) = splitter.split(mask);
        blocks.entry(env).or_insert_with(|| vec![C64::new(0.0, 0.0); dim])[kept] += amp * sign;
    }
    let mut envs: Vec<u64> = blocks.keys().copied().collect();
    envs.sort_unstable();
    let mut rho = DMatrix::zeros(dim, dim);
    for env in envs {
        let v = &blocks[&env];
        for (a, va) in v.iter().enumerate() {
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                rho[(a, b)] += va * vb.conj();
            }
        }
    }
    rho
}

/// Reduced density matrix on the kept orbitals, in their given order.
pub fn partial_trace_keep(state: &ManyOrbitalState, keep: &[usize]) -> Result<DMatrix<C64>, FockError> {
    let n = state.n_orbitals();
    check_keep(keep, n)?;
    let splitter = KeptSplitter::new(keep, n);
    match state {
        ManyOrbitalState::Pure { psi, .. } => Ok(reduce_amplitudes(
            psi.iter()
                .enumerate()
                .map(|(idx, &a)| (modes::mask_of_index(idx, n), a)),
            &splitter,
        )),
        ManyOrbitalState::Mixed { rho, .. } => {
            let dim = splitter.kept_dim();
            let mut groups: BTreeMap<u64, Vec<(usize, usize, f64)>> = BTreeMap::new();
            for idx in 0..rho.nrows() {
                let (kept, env, sign) = splitter.split(modes::mask_of_index(idx, n));
                groups.entry(env).or_default().push((idx, kept, sign));
            }
            let mut out = DMatrix::zeros(dim, dim);
            for members in groups.values() {
                for &(r, a, sa) in members {
                    for &(c, b, sb) in members {
                        out[(a, b)] += rho[(r, c)] * (sa * sb);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Two-orbital reduced state of orbitals `(i, j)`, with `i` as factor A.
pub fn partial_trace(state: &ManyOrbitalState, i: usize, j: usize) -> Result<TwoOrbitalState, FockError> {
    let m = partial_trace_keep(state, &[i, j])?;
    Ok(TwoOrbitalState::new(Matrix16::from_fn(|r, c| m[(r, c)]))?)
}

/// Single-orbital marginals `(ρ_A, ρ_B)` of a two-orbital state.
pub fn marginals(rho: &TwoOrbitalState) -> (DMatrix<C64>, DMatrix<C64>) {
    let state = ManyOrbitalState::Mixed {
        n_orbitals: 2,
        rho: rho.to_dmatrix(),
    };
    let a = partial_trace_keep(&state, &[0]).expect("orbital 0 exists");
    let b = partial_trace_keep(&state, &[1]).expect("orbital 1 exists");
    (a, b)
}

/// `ρ_A ⊗ ρ_B` as a 16×16 matrix in the occupation basis.
pub fn product_of_marginals(rho: &TwoOrbitalState) -> DMatrix<C64> {
    let (a, b) = marginals(rho);
    a.kronecker(&b)
}
