//! Natural-orbital rotation of a sector ground state.

use nalgebra::{DMatrix, SymmetricEigen};

use super::SectorBasis;

/// Spin-summed one-body matrix `γ_ij = Σ_σ ⟨c†_{iσ} c_{jσ}⟩` of a real state.
pub fn one_body_density(basis: &SectorBasis, psi: &[f64]) -> DMatrix<f64> {
    let l = basis.sites();
    let nu = basis.up_configs().len();
    let nd = basis.dn_configs().len();
    let mut gamma = DMatrix::zeros(l, l);
    // Hops within one species never cross the other species' string.
    let mut species =
        |configs: &[u32], rank: &dyn Fn(u32) -> usize, amp: &dyn Fn(usize, usize) -> f64, others: usize| {
            for (ka, &c) in configs.iter().enumerate() {
                for j in 0..l {
                    if c >> j & 1 == 0 {
                        continue;
                    }
                    for i in 0..l {
                        if i != j && c >> i & 1 == 1 {
                            continue;
                        }
                        let target = (c & !(1 << j)) | 1 << i;
                        let (lo, hi) = (i.min(j), i.max(j));
                        let between = if hi > lo + 1 {
                            (c >> (lo + 1) & ((1u32 << (hi - lo - 1)) - 1)).count_ones()
                        } else {
                            0
                        };
                        let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
                        let kb = rank(target);
                        let s: f64 = (0..others).map(|o| amp(kb, o) * amp(ka, o)).sum();
                        gamma[(i, j)] += sign * s;
                    }
                }
            }
        };
    species(
        basis.up_configs(),
        &|c| basis.rank_up(c).expect("in sector"),
        &|ku, kd| psi[ku * nd + kd],
        nd,
    );
    species(
        basis.dn_configs(),
        &|c| basis.rank_dn(c).expect("in sector"),
        &|kd, ku| psi[ku * nd + kd],
        nu,
    );
    gamma
}

/// Natural orbitals as columns, ordered by decreasing occupation, with the
/// occupations.
pub fn natural_orbitals(gamma: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let eig = SymmetricEigen::new(gamma.clone());
    let mut order: Vec<usize> = (0..gamma.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut u = DMatrix::zeros(gamma.nrows(), gamma.nrows());
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).clone_owned();
        let pivot = v
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
        if pivot < 0.0 {
            v = -v;
        }
        u.set_column(col, &v);
    }
    (u, order.iter().map(|&k| eig.eigenvalues[k]).collect())
}

fn determinant_of(u: &DMatrix<f64>, rows: u32, cols: u32) -> f64 {
    let r: Vec<usize> = (0..32).filter(|b| rows >> b & 1 == 1).collect();
    let c: Vec<usize> = (0..32).filter(|b| cols >> b & 1 == 1).collect();
    if r.is_empty() {
        return 1.0;
    }
    DMatrix::from_fn(r.len(), c.len(), |i, j| u[(r[i], c[j])]).determinant()
}

/// `D[A][I] = det U[I, A]`: the action of the orbital rotation on the
/// configurations of one species.
fn compound(u: &DMatrix<f64>, configs: &[u32]) -> DMatrix<f64> {
    DMatrix::from_fn(configs.len(), configs.len(), |a, i| {
        determinant_of(u, configs[i], configs[a])
    })
}

/// Amplitudes in the rotated orbitals `f†_a = Σ_i U[i, a] c†_i`, applied to
/// both spin species.
pub fn rotate_state(basis: &SectorBasis, psi: &[f64], u: &DMatrix<f64>) -> Vec<f64> {
    let nu = basis.up_configs().len();
    let nd = basis.dn_configs().len();
    let m = DMatrix::from_row_slice(nu, nd, psi);
    let du = compound(u, basis.up_configs());
    let dd = compound(u, basis.dn_configs());
    let rotated = du * m * dd.transpose();
    let mut out = Vec::with_capacity(nu * nd);
    for r in 0..nu {
        out.extend(rotated.row(r).iter().copied());
    }
    out
}

/// The state expressed in its own natural orbitals, with the occupations.
pub fn to_natural_orbitals(basis: &SectorBasis, psi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let gamma = one_body_density(basis, psi);
    let (u, occupations) = natural_orbitals(&gamma);
    (rotate_state(basis, psi, &u), occupations)
}
