//! Superselection projections, twirl channels, symmetry detection and the
//! choice of closed formula.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{EntanglementError, FockError};
use crate::fock::{
    build_operator, reflection, BasisVariant, Matrix16, OccupationBasis, OperatorTag, SymmetryEigenbasis,
    TwoOrbitalState, C64,
};

/// Which superselection rule restricts the local operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ssr {
    /// Local particle number.
    N,
    /// Local fermion parity.
    P,
}

impl Ssr {
    pub fn basis_variant(self) -> BasisVariant {
        match self {
            Self::N => BasisVariant::Nssr,
            Self::P => BasisVariant::Pssr,
        }
    }
}

impl fmt::Display for Ssr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::N => "N",
            Self::P => "P",
        })
    }
}

impl FromStr for Ssr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "n" | "N-SSR" => Ok(Self::N),
            "P" | "p" | "P-SSR" => Ok(Self::P),
            other => Err(format!("unknown superselection rule {other:?} (expected N or P)")),
        }
    }
}

fn local_numbers(index: usize) -> (u8, u8) {
    let (a, b) = OccupationBasis::label(index);
    (a.particles(), b.particles())
}

fn pinch(rho: &TwoOrbitalState, same_block: impl Fn(usize, usize) -> bool) -> TwoOrbitalState {
    let m = rho.matrix();
    TwoOrbitalState::from_matrix_unchecked(Matrix16::from_fn(|i, j| {
        if same_block(i, j) {
            m[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Removes coherences between different local particle numbers `(N_A, N_B)`.
pub fn nssr_project(rho: &TwoOrbitalState) -> TwoOrbitalState {
    pinch(rho, |i, j| local_numbers(i) == local_numbers(j))
}

/// Removes coherences between different local parities.
pub fn pssr_project(rho: &TwoOrbitalState) -> TwoOrbitalState {
    pinch(rho, |i, j| {
        let (ai, bi) = local_numbers(i);
        let (aj, bj) = local_numbers(j);
        ai % 2 == aj % 2 && bi % 2 == bj % 2
    })
}

pub fn ssr_project(rho: &TwoOrbitalState, ssr: Ssr) -> TwoOrbitalState {
    match ssr {
        Ssr::N => nssr_project(rho),
        Ssr::P => pssr_project(rho),
    }
}

/// Frobenius norm of what the projection for `ssr` would remove.
pub fn off_block_norm(rho: &TwoOrbitalState, ssr: Ssr) -> f64 {
    (rho.matrix() - ssr_project(rho, ssr).matrix()).norm()
}

/// Conserved quantity whose eigenspaces define a twirl.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    SpinZ,
    Number,
    SpinSquared,
    LocalNumber,
}

impl FromStr for Generator {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Sz" | "sz" => Ok(Self::SpinZ),
            "N" | "n" => Ok(Self::Number),
            "S2" | "s2" => Ok(Self::SpinSquared),
            "local-N" | "NANB" => Ok(Self::LocalNumber),
            other => Err(FockError::UnknownOperator(other.to_string())),
        }
    }
}

fn eigenspace_projectors(h: &Matrix16) -> Vec<Matrix16> {
    let dm = DMatrix::from_iterator(16, 16, h.iter().copied());
    let eig = dm.symmetric_eigen();
    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut projectors = Vec::new();
    let mut current = Matrix16::zeros();
    let mut last: Option<f64> = None;
    for k in order {
        let lambda = eig.eigenvalues[k];
        if let Some(prev) = last {
            if (lambda - prev).abs() > 1e-6 {
                projectors.push(current);
                current = Matrix16::zeros();
            }
        }
        let v = eig.eigenvectors.column(k);
        current += Matrix16::from_fn(|i, j| v[i] * v[j].conj());
        last = Some(lambda);
    }
    projectors.push(current);
    projectors
}

fn projectors(generator: Generator) -> &'static [Matrix16] {
    static CACHE: OnceLock<[Vec<Matrix16>; 4]> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let op = |tag| build_operator(&tag).expect("built-in observable").matrix;
        // Distinct integer labels 5·N_A + N_B separate the (N_A, N_B) blocks.
        let local = op(OperatorTag::NumberA) * C64::new(5.0, 0.0) + op(OperatorTag::NumberB);
        [
            eigenspace_projectors(&op(OperatorTag::SpinZ)),
            eigenspace_projectors(&op(OperatorTag::Number)),
            eigenspace_projectors(&op(OperatorTag::SpinSquared)),
            eigenspace_projectors(&local),
        ]
    });
    let k = match generator {
        Generator::SpinZ => 0,
        Generator::Number => 1,
        Generator::SpinSquared => 2,
        Generator::LocalNumber => 3,
    };
    &all[k]
}

/// `Σ_q P_q ρ P_q` over the eigenspaces of the generator.
pub fn twirl(rho: &TwoOrbitalState, generator: Generator) -> TwoOrbitalState {
    let m = rho.matrix();
    let out = projectors(generator)
        .iter()
        .fold(Matrix16::zeros(), |acc, p| acc + p * m * p);
    let out = (out + out.adjoint()) * C64::new(0.5, 0.0);
    TwoOrbitalState::from_matrix_unchecked(out)
}

/// Measured violation of one symmetry and whether it is within tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub violation: f64,
    pub holds: bool,
}

impl Check {
    fn new(violation: f64, tol: f64) -> Self {
        Self {
            violation,
            holds: violation <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub tol: f64,
    pub number: Check,
    pub spin_z: Check,
    pub spin_squared: Check,
    pub reflection: Check,
    pub p10_eq_p11: Check,
    pub p1_eq_p16: Check,
    /// `⟨Ψ₈|ρ|Ψ₉⟩` as `[re, im]`.
    pub b: [f64; 2],
    /// `⟨Ψ₆|ρ|Ψ₇⟩` in the parity-adapted basis, as `[re, im]`.
    pub b_prime: [f64; 2],
    pub b_vanishes: Check,
    pub b_prime_vanishes: Check,
}

fn commutator_norm(rho: &Matrix16, q: &Matrix16) -> f64 {
    (rho * q - q * rho).norm()
}

pub fn detect_symmetries(rho: &TwoOrbitalState, tol: f64) -> SymmetryReport {
    let m = rho.matrix();
    let op = |tag| build_operator(&tag).expect("built-in observable").matrix;
    let nbasis = SymmetryEigenbasis::new(BasisVariant::Nssr);
    let pbasis = SymmetryEigenbasis::new(BasisVariant::Pssr);
    let weight = |k: usize| rho.matrix_element(nbasis.vector(k), nbasis.vector(k)).re;
    let b = rho.matrix_element(nbasis.vector(7), nbasis.vector(8));
    let b_prime = rho.matrix_element(pbasis.vector(5), pbasis.vector(6));
    SymmetryReport {
        tol,
        number: Check::new(commutator_norm(m, &op(OperatorTag::Number)), tol),
        spin_z: Check::new(commutator_norm(m, &op(OperatorTag::SpinZ)), tol),
        spin_squared: Check::new(commutator_norm(m, &op(OperatorTag::SpinSquared)), tol),
        reflection: Check::new(commutator_norm(m, &reflection()), tol),
        p10_eq_p11: Check::new((weight(9) - weight(10)).abs(), tol),
        p1_eq_p16: Check::new((weight(0) - weight(15)).abs(), tol),
        b: [b.re, b.im],
        b_prime: [b_prime.re, b_prime.im],
        b_vanishes: Check::new(b.norm(), tol),
        b_prime_vanishes: Check::new(b_prime.norm(), tol),
    }
}

/// The four closed formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FormulaVariant {
    #[serde(rename = "NSSR-singlet")]
    NssrSinglet,
    #[serde(rename = "NSSR-general")]
    NssrGeneral,
    #[serde(rename = "PSSR-symmetric")]
    PssrSymmetric,
    #[serde(rename = "PSSR-general")]
    PssrGeneral,
}

impl FormulaVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::NssrSinglet => "NSSR-singlet",
            Self::NssrGeneral => "NSSR-general",
            Self::PssrSymmetric => "PSSR-symmetric",
            Self::PssrGeneral => "PSSR-general",
        }
    }

    pub fn ssr(self) -> Ssr {
        match self {
            Self::NssrSinglet | Self::NssrGeneral => Ssr::N,
            Self::PssrSymmetric | Self::PssrGeneral => Ssr::P,
        }
    }
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Most specific admissible formula for a report taken on the projected state.
///
/// The closed formulas need the projected state to be diagonal in the
/// symmetric eigenbasis. Under N-SSR that leaves Sᶻ and a vanishing
/// `Ψ₈/Ψ₉` coherence (implied by S⃗² or by reflection symmetry); under P-SSR
/// also N̂ and a vanishing `Ψ₆/Ψ₇` coherence.
pub fn select_formula(report: &SymmetryReport, ssr: Ssr) -> Result<FormulaVariant, EntanglementError> {
    let mut missing = Vec::new();
    if !report.spin_z.holds {
        missing.push(format!("Sz (commutator {:.3e})", report.spin_z.violation));
    }
    if ssr == Ssr::P && !report.number.holds {
        missing.push(format!("N (commutator {:.3e})", report.number.violation));
    }
    if !report.b_vanishes.holds {
        missing.push(format!(
            "S2 or reflection (|<Psi8|rho|Psi9>| = {:.3e})",
            report.b_vanishes.violation
        ));
    }
    if ssr == Ssr::P && !report.b_prime_vanishes.holds {
        missing.push(format!(
            "reflection (|<Psi6|rho|Psi7>| = {:.3e})",
            report.b_prime_vanishes.violation
        ));
    }
    if !missing.is_empty() {
        return Err(EntanglementError::InsufficientSymmetry(missing.join(", ")));
    }
    Ok(match ssr {
        Ssr::N if report.p10_eq_p11.holds => FormulaVariant::NssrSinglet,
        Ssr::N => FormulaVariant::NssrGeneral,
        Ssr::P if report.p10_eq_p11.holds && report.p1_eq_p16.holds => FormulaVariant::PssrSymmetric,
        Ssr::P => FormulaVariant::PssrGeneral,
    })
}
