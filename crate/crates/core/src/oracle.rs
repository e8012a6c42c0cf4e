//! Independent checks for the closed formulas: a KKT solve of the
//! constrained KL minimization, full partial-transpose certification, and
//! element-by-element Wick evaluation of Gaussian reduced states.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::OracleError;
use crate::fock::basis::modes;
use crate::fock::{hermitian_eigenvalues, Matrix16, TwoOrbitalState, C64};
use crate::tol;

/// A two-qubit-like sector: `pair` spans the coherent doublet whose weight
/// difference must be covered by the product of the `product` weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SectorMask {
    pub name: &'static str,
    pub pair: (usize, usize),
    pub product: (usize, usize),
}

/// `Span{Ψ₈, Ψ₉, Ψ₁₀, Ψ₁₁}`.
pub const SECTOR_M: SectorMask = SectorMask {
    name: "M",
    pair: (7, 8),
    product: (9, 10),
};

/// `Span{Ψ₁, Ψ₆, Ψ₇, Ψ₁₆}`.
pub const SECTOR_M_PRIME: SectorMask = SectorMask {
    name: "M'",
    pair: (5, 6),
    product: (0, 15),
};

/// `min Σ pᵢ ln(pᵢ/qᵢ)` over normalized `q ≥ 0` obeying
/// `q_c q_d ≥ ((q_a − q_b)/2)²` in every listed sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedSimplexProblem {
    p: [f64; 16],
    sectors: Vec<SectorMask>,
}

impl ConstrainedSimplexProblem {
    pub fn new(p: [f64; 16], sectors: Vec<SectorMask>) -> Result<Self, OracleError> {
        if let Some((i, w)) = p
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < tol::SPECTRUM_NEGATIVE)
        {
            return Err(OracleError::InvalidProblem(format!("weight p[{i}] = {w}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::SPECTRUM_SUM {
            return Err(OracleError::InvalidProblem(format!("weights sum to {sum}")));
        }
        Ok(Self {
            p: p.map(|w| w.max(0.0)),
            sectors,
        })
    }

    /// Only sector M is constrained.
    pub fn nssr(p: [f64; 16]) -> Result<Self, OracleError> {
        Self::new(p, vec![SECTOR_M])
    }

    /// Sectors M and M′ are constrained.
    pub fn pssr(p: [f64; 16]) -> Result<Self, OracleError> {
        Self::new(p, vec![SECTOR_M, SECTOR_M_PRIME])
    }

    pub fn p(&self) -> &[f64; 16] {
        &self.p
    }

    pub fn sectors(&self) -> &[SectorMask] {
        &self.sectors
    }

    /// Objective at `q`; `+∞` off the support.
    pub fn objective(&self, q: &[f64; 16]) -> f64 {
        kl(&self.p, q)
    }

    /// Largest violation of normalization, positivity or a sector constraint.
    pub fn infeasibility(&self, q: &[f64; 16]) -> f64 {
        let mut worst = (q.iter().sum::<f64>() - 1.0).abs();
        for &w in q {
            worst = worst.max(-w);
        }
        for s in &self.sectors {
            let gap = ((q[s.pair.0] - q[s.pair.1]) / 2.0).powi(2) - q[s.product.0] * q[s.product.1];
            worst = worst.max(gap);
        }
        worst
    }
}

pub(crate) fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&pi, &qi)| {
            if pi <= 0.0 {
                0.0
            } else if qi <= 0.0 {
                f64::INFINITY
            } else {
                pi * (pi / qi).ln()
            }
        })
        .sum()
}

/// How a sector optimum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SectorPhase {
    /// The target already satisfies the constraint.
    Interior,
    /// Root of the KKT system on the constraint surface.
    Surface,
    /// Both product weights vanish; the optimum is the even split of the pair.
    Corner,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorCertificate {
    pub sector: &'static str,
    pub phase: SectorPhase,
    pub iterations: usize,
    pub multiplier: f64,
    pub feasibility: f64,
    pub stationarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    pub value: f64,
    pub q: [f64; 16],
    pub certificates: Vec<SectorCertificate>,
}

const MAX_BISECTIONS: usize = 400;
const FEASIBILITY_CERT: f64 = 1e-12;
const STATIONARITY_CERT: f64 = 1e-9;

/// Solves one sector. Inputs are ordered `(a, b, c, d)` with `(a, b)` the
/// coherent pair and `(c, d)` the product weights.
pub fn solve_sector(p: [f64; 4], name: &'static str) -> Result<([f64; 4], SectorCertificate), OracleError> {
    let swapped = p[1] > p[0];
    let [pa, pb, pc, pd] = if swapped { [p[1], p[0], p[2], p[3]] } else { p };
    let half_gap = (pa - pb) / 2.0;

    let cert = |phase, iterations, multiplier, feasibility, stationarity| SectorCertificate {
        sector: name,
        phase,
        iterations,
        multiplier,
        feasibility,
        stationarity,
    };
    let unswap = |q: [f64; 4]| if swapped { [q[1], q[0], q[2], q[3]] } else { q };

    if pc * pd >= half_gap * half_gap {
        return Ok((p, cert(SectorPhase::Interior, 0, 0.0, 0.0, 0.0)));
    }

    let total = pa + pb;
    if pc <= 0.0 && pd <= 0.0 {
        let q = [total / 2.0, total / 2.0, 0.0, 0.0];
        return Ok((unswap(q), cert(SectorPhase::Corner, 0, 0.0, 0.0, 0.0)));
    }

    // Stationarity with unit normalization multiplier forces q_c = p_c + k,
    // q_d = p_d + k and q_{a,b} = m ± d with m = (p_a+p_b)/2 − k and
    // d = √(q_c q_d). The remaining equation h(k) = 0 has h(0) < 0 and
    // h(k_max) = p_b ≥ 0, where k_max makes q_b vanish.
    let shape = |k: f64| {
        let d = ((pc + k) * (pd + k)).sqrt();
        let m = total / 2.0 - k;
        (m, d)
    };
    let h = |k: f64| {
        let (m, d) = shape(k);
        let k_over_d = if k == 0.0 { 0.0 } else { k / d };
        (m + d) * (1.0 + k_over_d) - pa
    };
    let k_max = (total * total / 4.0 - pc * pd) / (total + pc + pd);
    let (mut lo, mut hi) = (0.0f64, k_max);
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    let (m, d) = shape(k);
    let q = [m + d, (m - d).max(0.0), pc + k, pd + k];

    let nu = k / (d * d);
    let stationarity = [
        pa - q[0] * (1.0 + nu * d),
        pb - q[1] * (1.0 - nu * d),
        pc - q[2] * (1.0 - nu * q[3]),
        pd - q[3] * (1.0 - nu * q[2]),
    ]
    .iter()
    .fold(0.0f64, |acc, r| acc.max(r.abs()));
    let feasibility = (q[2] * q[3] - ((q[0] - q[1]) / 2.0).powi(2))
        .abs()
        .max((q.iter().sum::<f64>() - (pa + pb + pc + pd)).abs());

    if !(feasibility <= FEASIBILITY_CERT && stationarity <= STATIONARITY_CERT && nu >= 0.0) {
        return Err(OracleError::NotCertified {
            iterations,
            feasibility,
            stationarity,
        });
    }
    Ok((
        unswap(q),
        cert(SectorPhase::Surface, iterations, nu, feasibility, stationarity),
    ))
}

/// Minimizes the KL objective sector by sector, copying the target weights
/// outside the constrained sectors.
pub fn kl_min_oracle(problem: &ConstrainedSimplexProblem) -> Result<OracleSolution, OracleError> {
    let p = problem.p;
    let mut q = p;
    let mut certificates = Vec::with_capacity(problem.sectors.len());
    for s in &problem.sectors {
        let idx = [s.pair.0, s.pair.1, s.product.0, s.product.1];
        let (qs, cert) = solve_sector(idx.map(|i| p[i]), s.name)?;
        for (i, v) in idx.iter().zip(qs) {
            q[*i] = v;
        }
        certificates.push(cert);
    }
    Ok(OracleSolution {
        value: kl(&p, &q),
        q,
        certificates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptReport {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Peres–Horodecki test on the full 16×16 matrix.
pub fn ppt_oracle(rho: &TwoOrbitalState) -> PptReport {
    ppt_of_matrix(rho.matrix())
}

pub fn ppt_of_matrix(m: &Matrix16) -> PptReport {
    let pt = crate::fock::partial_transpose_matrix(m);
    let min_eigenvalue = hermitian_eigenvalues(&DMatrix::from_iterator(16, 16, pt.iter().copied()))[0];
    PptReport {
        is_ppt: min_eigenvalue >= tol::PPT,
        min_eigenvalue,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ladder {
    Create(usize),
    Annihilate(usize),
}

fn contraction(x: Ladder, y: Ladder, c: &DMatrix<C64>) -> C64 {
    match (x, y) {
        (Ladder::Create(i), Ladder::Annihilate(j)) => c[(i, j)],
        (Ladder::Annihilate(i), Ladder::Create(j)) => {
            let delta = if i == j { 1.0 } else { 0.0 };
            C64::new(delta, 0.0) - c[(j, i)]
        }
        _ => C64::new(0.0, 0.0),
    }
}

fn pfaffian(m: &[Vec<C64>], idx: &[usize]) -> C64 {
    if idx.is_empty() {
        return C64::new(1.0, 0.0);
    }
    let first = idx[0];
    let mut total = C64::new(0.0, 0.0);
    for k in 1..idx.len() {
        let entry = m[first][idx[k]];
        if entry == C64::new(0.0, 0.0) {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|(n, _)| n + 1 != k)
            .map(|(_, &v)| v)
            .collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += entry * pfaffian(m, &rest) * sign;
    }
    total
}

/// Expectation of an ordered product of ladder operators by Wick's theorem.
fn wick_expectation(ops: &[Ladder], c: &DMatrix<C64>) -> C64 {
    if ops.len() % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let n = ops.len();
    let table: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < j {
                        contraction(ops[i], ops[j], c)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    pfaffian(&table, &(0..n).collect::<Vec<_>>())
}

/// Applies the string right-to-left to a configuration; returns the
/// resulting configuration and sign, or `None` if it is annihilated.
fn apply_string(ops: &[Ladder], mut mask: u64) -> Option<(u64, f64)> {
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        match *op {
            Ladder::Create(k) => {
                if mask >> k & 1 == 1 {
                    return None;
                }
                sign *= modes::jw_sign(mask, k);
                mask |= 1 << k;
            }
            Ladder::Annihilate(k) => {
                if mask >> k & 1 == 0 {
                    return None;
                }
                sign *= modes::jw_sign(mask, k);
                mask &= !(1 << k);
            }
        }
    }
    Some((mask, sign))
}

/// Two-orbital reduced state of a number-conserving Gaussian state from its
/// 4×4 correlation matrix `C_ij = ⟨c†ᵢ c_j⟩` in mode order (A↑, A↓, B↑, B↓).
pub fn wick_rdm_oracle(c: &DMatrix<C64>) -> Result<TwoOrbitalState, OracleError> {
    if c.nrows() != 4 || c.ncols() != 4 {
        return Err(OracleError::Unphysical(format!(
            "{}x{} correlation matrix",
            c.nrows(),
            c.ncols()
        )));
    }
    let hermiticity = (c - c.adjoint()).norm();
    if hermiticity > tol::HERMITIAN {
        return Err(OracleError::Unphysical(format!("not Hermitian ({hermiticity:.3e})")));
    }
    let ev = hermitian_eigenvalues(c);
    if ev[0] < -1e-10 || ev[3] > 1.0 + 1e-10 {
        return Err(OracleError::Unphysical(format!(
            "eigenvalues {:.3e}..{:.3e} outside [0, 1]",
            ev[0], ev[3]
        )));
    }

    let mut rho = Matrix16::zeros();
    for n in 0..16 {
        let n_mask = modes::mask_of_index(n, 2);
        for m in 0..16 {
            let m_mask = modes::mask_of_index(m, 2);
            // |m⟩⟨n| up to sign, one factor per mode in mode order.
            let mut ops = Vec::with_capacity(8);
            for k in 0..4 {
                match (n_mask >> k & 1, m_mask >> k & 1) {
                    (1, 1) => ops.extend([Ladder::Create(k), Ladder::Annihilate(k)]),
                    (0, 0) => ops.extend([Ladder::Annihilate(k), Ladder::Create(k)]),
                    (0, 1) => ops.push(Ladder::Create(k)),
                    _ => ops.push(Ladder::Annihilate(k)),
                }
            }
            let (image, sign) = apply_string(&ops, n_mask).expect("string maps |n> to |m>");
            debug_assert_eq!(image, m_mask);
            rho[(n, m)] = wick_expectation(&ops, c) * sign;
        }
    }
    TwoOrbitalState::new(rho).map_err(|e| OracleError::Unphysical(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(entries: &[(usize, f64)]) -> [f64; 16] {
        let mut p = [0.0; 16];
        for &(i, w) in entries {
            p[i] = w;
        }
        p
    }

    #[test]
    fn separable_target_is_its_own_optimum() {
        let p = [1.0 / 16.0; 16];
        let sol = kl_min_oracle(&ConstrainedSimplexProblem::pssr(p).unwrap()).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.q, p);
    }

    #[test]
    fn pure_singlet_corner() {
        let sol = kl_min_oracle(&ConstrainedSimplexProblem::nssr(with(&[(7, 1.0)])).unwrap()).unwrap();
        assert!((sol.value - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(sol.certificates[0].phase, SectorPhase::Corner);
    }

    #[test]
    fn surface_solution_is_certified() {
        let p = with(&[(7, 0.5), (8, 0.1), (9, 0.1), (10, 0.1), (0, 0.2)]);
        let sol = kl_min_oracle(&ConstrainedSimplexProblem::nssr(p).unwrap()).unwrap();
        let expected = 0.3 * 0.75f64.ln() + 0.5 * 1.25f64.ln();
        assert!((sol.value - expected).abs() < 1e-13);
        assert!((sol.q[7] - 0.4).abs() < 1e-13);
        assert!((sol.q[8] - 2.0 / 15.0).abs() < 1e-13);
        assert!((sol.q[9] - 2.0 / 15.0).abs() < 1e-13);
        let c = &sol.certificates[0];
        assert!(c.feasibility <= 1e-12 && c.stationarity <= 1e-9);
    }

    #[test]
    fn rejects_unnormalized_targets() {
        assert!(ConstrainedSimplexProblem::nssr([0.1; 16]).is_err());
    }

    #[test]
    fn diagonal_correlations_give_product_of_bernoulli_modes() {
        let occ = [0.2, 0.7, 0.5, 0.9];
        let c = DMatrix::from_fn(4, 4, |i, j| C64::new(if i == j { occ[i] } else { 0.0 }, 0.0));
        let rho = wick_rdm_oracle(&c).unwrap();
        for idx in 0..16 {
            let mask = modes::mask_of_index(idx, 2);
            let want: f64 = (0..4)
                .map(|k| if mask >> k & 1 == 1 { occ[k] } else { 1.0 - occ[k] })
                .product();
            assert!((rho.matrix()[(idx, idx)].re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn unphysical_correlations_are_rejected() {
        let c = DMatrix::from_fn(4, 4, |i, j| C64::new(if i == j { 1.2 } else { 0.0 }, 0.0));
        assert!(matches!(wick_rdm_oracle(&c), Err(OracleError::Unphysical(_))));
    }

    #[test]
    fn ppt_reference_states() {
        let basis = crate::fock::SymmetryEigenbasis::new(crate::fock::BasisVariant::Nssr);
        let r = ppt_oracle(&TwoOrbitalState::from_pure(basis.vector(7)));
        assert!(!r.is_ppt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(ppt_oracle(&TwoOrbitalState::maximally_mixed()).is_ppt);
    }
}
