//! Sector weights, the closed entanglement formulas, closest separable
//! states and the correlation measures built on them.

use serde::{Serialize, Serializer};

use crate::error::{EntanglementError, OracleError};
use crate::fock::trace::product_of_marginals;
use crate::fock::{relative_entropy_matrices, BasisVariant, SymmetryEigenbasis, TwoOrbitalState, C64};
use crate::oracle::{kl_min_oracle, ConstrainedSimplexProblem, SECTOR_M, SECTOR_M_PRIME};
use crate::ssr::{
    detect_symmetries, off_block_norm, select_formula, ssr_project, twirl, FormulaVariant, Generator, Ssr,
    SymmetryReport,
};
use crate::tol;

fn serialize_complex<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Diagonal weights `pᵢ = ⟨Ψᵢ|ρ̃|Ψᵢ⟩` (zero-based) and the two coherences
/// that the closed formulas assume to vanish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorSpectrum {
    pub basis: BasisVariant,
    pub p: [f64; 16],
    /// `⟨Ψ₈|ρ̃|Ψ₉⟩`.
    #[serde(serialize_with = "serialize_complex")]
    pub b: C64,
    /// `⟨Ψ₆|ρ̃|Ψ₇⟩` in the same basis as the weights.
    #[serde(serialize_with = "serialize_complex")]
    pub b_prime: C64,
}

impl SectorSpectrum {
    /// Spectrum of a state that is diagonal in the symmetric eigenbasis.
    pub fn from_weights(basis: BasisVariant, p: [f64; 16]) -> Result<Self, EntanglementError> {
        Self::with_coherences(basis, p, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn with_coherences(basis: BasisVariant, p: [f64; 16], b: C64, b_prime: C64) -> Result<Self, EntanglementError> {
        for (i, &w) in p.iter().enumerate() {
            if !w.is_finite() || w < tol::SPECTRUM_NEGATIVE {
                return Err(EntanglementError::NegativeWeight {
                    index: i + 1,
                    weight: w,
                });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::SPECTRUM_SUM {
            return Err(EntanglementError::Normalization(sum));
        }
        Ok(Self {
            basis,
            p: p.map(|w| w.max(0.0)),
            b,
            b_prime,
        })
    }
}

/// Reads the weights and coherences of an SSR-projected state.
pub fn sector_spectrum(rho: &TwoOrbitalState, basis: &SymmetryEigenbasis) -> Result<SectorSpectrum, EntanglementError> {
    let variant = basis.variant();
    let ssr = match variant {
        BasisVariant::Nssr => Ssr::N,
        BasisVariant::Pssr => Ssr::P,
    };
    let residue = off_block_norm(rho, ssr);
    if residue > tol::SYMMETRY {
        return Err(EntanglementError::NotProjected(variant.name(), residue));
    }
    let element = |i: usize, j: usize| rho.matrix_element(basis.vector(i), basis.vector(j));
    let p: [f64; 16] = std::array::from_fn(|k| element(k, k).re);
    SectorSpectrum::with_coherences(variant, p, element(7, 8), element(5, 6))
}

fn check_nonnegative(weights: &[(usize, f64)]) -> Result<(), EntanglementError> {
    for &(index, weight) in weights {
        if !weight.is_finite() || weight < tol::SPECTRUM_NEGATIVE {
            return Err(EntanglementError::NegativeWeight { index, weight });
        }
    }
    Ok(())
}

/// `q₁₀q₁₁ ≥ ((q₈−q₉)/2)²`.
pub fn is_separable_m(p8: f64, p9: f64, p10: f64, p11: f64) -> Result<bool, EntanglementError> {
    check_nonnegative(&[(8, p8), (9, p9), (10, p10), (11, p11)])?;
    Ok(pair_is_separable(p8, p9, p10, p11))
}

/// `q₁q₁₆ ≥ ((q₆−q₇)/2)²`.
pub fn is_separable_m_prime(p1: f64, p6: f64, p7: f64, p16: f64) -> Result<bool, EntanglementError> {
    check_nonnegative(&[(1, p1), (6, p6), (7, p7), (16, p16)])?;
    Ok(pair_is_separable(p6, p7, p1, p16))
}

fn pair_is_separable(a: f64, b: f64, c: f64, d: f64) -> bool {
    let half_gap = (a - b) / 2.0;
    c * d >= half_gap * half_gap
}

/// Auxiliary quantities of the general closed solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralAux {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SectorAux {
    Singlet { r: f64, t: f64 },
    General(Option<GeneralAux>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SectorOutcome {
    value: f64,
    /// Ordered like the input: pair weights, then product weights.
    q: [f64; 4],
    aux: SectorAux,
}

fn xlogy_ratio(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Sector solution for equal product weights, fed `(p_a, p_b, p_c, p_d)`.
fn sector_equal_products(p: [f64; 4]) -> SectorOutcome {
    let [pa, pb, pc, pd] = p;
    let t = pa.max(pb);
    let r = pa.min(pb) + pc + pd;
    if r >= t {
        return SectorOutcome {
            value: 0.0,
            q: p,
            aux: SectorAux::Singlet { r, t },
        };
    }
    let a_is_large = pa >= pb;
    let small = pa.min(pb);
    let (q_large, q_small, qc, qd, value) = if r <= 0.0 {
        // Pure-pair corner: the even split of the pair is separable.
        (t / 2.0, t / 2.0, 0.0, 0.0, t * std::f64::consts::LN_2)
    } else {
        let scale = (r + t) / (2.0 * r);
        let value = r * (2.0 * r / (r + t)).ln() + t * (2.0 * t / (r + t)).ln();
        ((r + t) / 2.0, scale * small, scale * pc, scale * pd, value)
    };
    let q = if a_is_large {
        [q_large, q_small, qc, qd]
    } else {
        [q_small, q_large, qc, qd]
    };
    SectorOutcome {
        value,
        q,
        aux: SectorAux::Singlet { r, t },
    }
}

/// General full-rank sector solution, fed `(p_a, p_b, p_c, p_d)`.
fn sector_general(p: [f64; 4], sector: &'static str, labels: [usize; 4]) -> Result<SectorOutcome, EntanglementError> {
    let [pa, pb, pc, pd] = p;
    if pair_is_separable(pa, pb, pc, pd) {
        return Ok(SectorOutcome {
            value: 0.0,
            q: p,
            aux: SectorAux::General(None),
        });
    }
    for (w, index) in p.iter().zip(labels) {
        if *w <= tol::SUPPORT {
            return Err(EntanglementError::DegenerateSector {
                sector,
                index,
                weight: *w,
            });
        }
    }
    let swapped = pb > pa;
    let (p1, p2) = if swapped { (pb, pa) } else { (pa, pb) };
    let s = p1 + p2 + pc + pd;
    let a = s * s - (pc - pd).powi(2);
    let b = (p1 - p2) * s;
    let c =
        (pc + pd).powi(2) * (p1 - p2).powi(2) + 8.0 * pc * pd * (2.0 * pc * pd + (pc + pd) * (p1 + p2) + 2.0 * p1 * p2);
    let root = c.max(0.0).sqrt();
    let q1 = (a + b + root) / (4.0 * (s - p2));
    let q2 = (a - b - root) / (4.0 * (s - p1));
    let k = (p1 + p2 - q1 - q2) / 2.0;
    let (qa, qb) = if swapped { (q2, q1) } else { (q1, q2) };
    let q = [qa, qb, pc + k, pd + k];
    let value = p.iter().zip(&q).map(|(&pi, &qi)| xlogy_ratio(pi, qi)).sum();
    Ok(SectorOutcome {
        value,
        q,
        aux: SectorAux::General(Some(GeneralAux { a, b, c, s })),
    })
}

const M_IDX: [usize; 4] = [7, 8, 9, 10];
const M_PRIME_IDX: [usize; 4] = [5, 6, 0, 15];

fn gather(p: &[f64; 16], idx: [usize; 4]) -> [f64; 4] {
    idx.map(|i| p[i])
}

fn labels(idx: [usize; 4]) -> [usize; 4] {
    idx.map(|i| i + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementResult {
    /// Nats.
    pub value: f64,
    pub variant: FormulaVariant,
    pub basis: BasisVariant,
    pub p: [f64; 16],
    pub q_star: [f64; 16],
    pub r: Option<f64>,
    pub t: Option<f64>,
    pub r_prime: Option<f64>,
    pub t_prime: Option<f64>,
    pub general: Option<GeneralAux>,
    pub general_prime: Option<GeneralAux>,
    /// The spin twirl was applied to remove a real `Ψ₈/Ψ₉` coherence.
    pub twirled: bool,
}

impl EntanglementResult {
    fn new(spec: &SectorSpectrum, variant: FormulaVariant) -> Self {
        Self {
            value: 0.0,
            variant,
            basis: spec.basis,
            p: spec.p,
            q_star: spec.p,
            r: None,
            t: None,
            r_prime: None,
            t_prime: None,
            general: None,
            general_prime: None,
            twirled: false,
        }
    }

    fn absorb(&mut self, outcome: SectorOutcome, idx: [usize; 4], primed: bool) {
        self.value += outcome.value;
        for (i, q) in idx.iter().zip(outcome.q) {
            self.q_star[*i] = q;
        }
        match (outcome.aux, primed) {
            (SectorAux::Singlet { r, t }, false) => {
                self.r = Some(r);
                self.t = Some(t);
            }
            (SectorAux::Singlet { r, t }, true) => {
                self.r_prime = Some(r);
                self.t_prime = Some(t);
            }
            (SectorAux::General(aux), false) => self.general = aux,
            (SectorAux::General(aux), true) => self.general_prime = aux,
        }
    }

    /// `Σ pᵢ ln(pᵢ/qᵢ*)` over all sixteen weights.
    pub fn kl_value(&self) -> f64 {
        self.p.iter().zip(&self.q_star).map(|(&p, &q)| xlogy_ratio(p, q)).sum()
    }
}

fn require_basis(spec: &SectorSpectrum, expected: BasisVariant) -> Result<(), EntanglementError> {
    if spec.basis != expected {
        return Err(EntanglementError::BasisMismatch {
            found: spec.basis.name(),
            expected: expected.name(),
        });
    }
    Ok(())
}

fn require_vanishing(name: &str, z: C64) -> Result<(), EntanglementError> {
    if z.norm() > tol::SYMMETRY {
        return Err(EntanglementError::Precondition(format!(
            "coherence {name} = {:.3e}{:+.3e}i is not zero; apply the spin twirl or use the oracle",
            z.re, z.im
        )));
    }
    Ok(())
}

/// Closed formula for `p₁₀ = p₁₁` under N-SSR.
pub fn nssr_entanglement_singlet(spec: &SectorSpectrum) -> Result<EntanglementResult, EntanglementError> {
    require_basis(spec, BasisVariant::Nssr)?;
    require_vanishing("b", spec.b)?;
    let p = &spec.p;
    if (p[9] - p[10]).abs() > tol::SYMMETRY {
        return Err(EntanglementError::Precondition(format!(
            "p10 = {} differs from p11 = {}",
            p[9], p[10]
        )));
    }
    let mut result = EntanglementResult::new(spec, FormulaVariant::NssrSinglet);
    result.absorb(sector_equal_products(gather(p, M_IDX)), M_IDX, false);
    Ok(result)
}

/// General closed formula under N-SSR; refuses rank-deficient entangled sectors.
pub fn nssr_entanglement_general(spec: &SectorSpectrum) -> Result<EntanglementResult, EntanglementError> {
    require_basis(spec, BasisVariant::Nssr)?;
    require_vanishing("b", spec.b)?;
    let mut result = EntanglementResult::new(spec, FormulaVariant::NssrGeneral);
    let outcome = sector_general(gather(&spec.p, M_IDX), SECTOR_M.name, labels(M_IDX))?;
    result.absorb(outcome, M_IDX, false);
    Ok(result)
}

/// P-SSR formulas; each sector uses the equal-product solution when its
/// product weights agree and the general solution otherwise.
pub fn pssr_entanglement(spec: &SectorSpectrum) -> Result<EntanglementResult, EntanglementError> {
    require_basis(spec, BasisVariant::Pssr)?;
    require_vanishing("b", spec.b)?;
    require_vanishing("b'", spec.b_prime)?;
    let p = &spec.p;
    let m_equal = (p[9] - p[10]).abs() <= tol::SYMMETRY;
    let m_prime_equal = (p[0] - p[15]).abs() <= tol::SYMMETRY;
    let variant = if m_equal && m_prime_equal {
        FormulaVariant::PssrSymmetric
    } else {
        FormulaVariant::PssrGeneral
    };
    let mut result = EntanglementResult::new(spec, variant);
    for (idx, equal, name, primed) in [
        (M_IDX, m_equal, SECTOR_M.name, false),
        (M_PRIME_IDX, m_prime_equal, SECTOR_M_PRIME.name, true),
    ] {
        let outcome = if equal {
            sector_equal_products(gather(p, idx))
        } else {
            sector_general(gather(p, idx), name, labels(idx))?
        };
        result.absorb(outcome, idx, primed);
    }
    Ok(result)
}

pub fn evaluate(spec: &SectorSpectrum, variant: FormulaVariant) -> Result<EntanglementResult, EntanglementError> {
    match variant {
        FormulaVariant::NssrSinglet => nssr_entanglement_singlet(spec),
        FormulaVariant::NssrGeneral => nssr_entanglement_general(spec),
        FormulaVariant::PssrSymmetric | FormulaVariant::PssrGeneral => pssr_entanglement(spec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementOptions {
    /// Symmetry detection tolerance.
    pub tol: f64,
    /// Permit the spin twirl to remove a real `Ψ₈/Ψ₉` coherence.
    pub twirl_spin: bool,
}

impl Default for EntanglementOptions {
    fn default() -> Self {
        Self {
            tol: tol::SYMMETRY,
            twirl_spin: false,
        }
    }
}

/// The SSR-projected state with its symmetry report and spectrum.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub ssr: Ssr,
    pub projected: TwoOrbitalState,
    pub report: SymmetryReport,
    pub spectrum: SectorSpectrum,
    pub variant: Result<FormulaVariant, EntanglementError>,
    pub twirled: bool,
}

pub fn prepare(rho: &TwoOrbitalState, ssr: Ssr, options: &EntanglementOptions) -> Result<Prepared, EntanglementError> {
    let mut projected = ssr_project(rho, ssr);
    let mut report = detect_symmetries(&projected, options.tol);
    let mut variant = select_formula(&report, ssr);
    let mut twirled = false;
    if variant.is_err() && options.twirl_spin && report.spin_z.holds && report.b[1].abs() <= options.tol {
        projected = twirl(&projected, Generator::SpinSquared);
        report = detect_symmetries(&projected, options.tol);
        variant = select_formula(&report, ssr);
        twirled = true;
    }
    let spectrum = sector_spectrum(&projected, &SymmetryEigenbasis::new(ssr.basis_variant()))?;
    Ok(Prepared {
        ssr,
        projected,
        report,
        spectrum,
        variant,
        twirled,
    })
}

/// Projects, checks symmetries, selects the closed formula and evaluates it.
pub fn entanglement(
    rho: &TwoOrbitalState,
    ssr: Ssr,
    options: &EntanglementOptions,
) -> Result<EntanglementResult, EntanglementError> {
    let prepared = prepare(rho, ssr, options)?;
    let variant = prepared.variant?;
    let mut result = evaluate(&prepared.spectrum, variant)?;
    result.twirled = prepared.twirled;
    Ok(result)
}

/// `σ* = Σ qᵢ* |Ψᵢ⟩⟨Ψᵢ|`.
pub fn closest_separable_state(result: &EntanglementResult) -> Result<TwoOrbitalState, EntanglementError> {
    Ok(TwoOrbitalState::from_sector_weights(
        &SymmetryEigenbasis::new(result.basis),
        &result.q_star,
    )?)
}

/// `S(ρ ‖ ρ_A ⊗ ρ_B)`.
pub fn mutual_information(rho: &TwoOrbitalState) -> f64 {
    relative_entropy_matrices(&rho.to_dmatrix(), &product_of_marginals(rho))
}

/// `S(σ* ‖ ρ_A ⊗ ρ_B)` with σ* the closest separable state of the projected ρ.
pub fn classical_correlation(
    rho: &TwoOrbitalState,
    ssr: Ssr,
    options: &EntanglementOptions,
) -> Result<f64, EntanglementError> {
    let result = entanglement(rho, ssr, options)?;
    let sigma = closest_separable_state(&result)?;
    Ok(relative_entropy_matrices(
        &sigma.to_dmatrix(),
        &product_of_marginals(rho),
    ))
}

/// How a pair value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Formula(FormulaVariant),
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue {
    pub value: f64,
    pub method: Method,
}

/// Closed formula when admissible; the KL oracle on the same spectrum when
/// the formula refuses a rank-deficient sector.
pub fn entanglement_with_fallback(
    rho: &TwoOrbitalState,
    ssr: Ssr,
    options: &EntanglementOptions,
) -> Result<PairValue, EntanglementError> {
    let prepared = prepare(rho, ssr, options)?;
    let variant = prepared.variant?;
    match evaluate(&prepared.spectrum, variant) {
        Ok(r) => Ok(PairValue {
            value: r.value,
            method: Method::Formula(variant),
        }),
        Err(EntanglementError::DegenerateSector { .. }) => {
            let value = oracle_value(&prepared.spectrum, ssr)?;
            Ok(PairValue {
                value,
                method: Method::Oracle,
            })
        }
        Err(e) => Err(e),
    }
}

/// KL-oracle value for a spectrum under the given rule.
pub fn oracle_value(spec: &SectorSpectrum, ssr: Ssr) -> Result<f64, OracleError> {
    let problem = match ssr {
        Ssr::N => ConstrainedSimplexProblem::nssr(spec.p)?,
        Ssr::P => ConstrainedSimplexProblem::pssr(spec.p)?,
    };
    Ok(kl_min_oracle(&problem)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCost {
    pub pair: usize,
    pub value: Option<f64>,
    pub method: Option<Method>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeniorityCost {
    /// Sum over the pairs that could be evaluated, in nats.
    pub total: f64,
    pub pairs: Vec<PairCost>,
    /// Some pairs failed and are missing from the total.
    pub partial: bool,
}

/// Sum of pair entanglements over the given pair reduced states.
pub fn seniority_cost(pair_rdms: &[TwoOrbitalState], ssr: Ssr, options: &EntanglementOptions) -> SeniorityCost {
    let pairs: Vec<PairCost> = pair_rdms
        .iter()
        .enumerate()
        .map(|(k, rho)| match entanglement_with_fallback(rho, ssr, options) {
            Ok(v) => PairCost {
                pair: k,
                value: Some(v.value),
                method: Some(v.method),
                error: None,
            },
            Err(e) => PairCost {
                pair: k,
                value: None,
                method: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    SeniorityCost {
        total: pairs.iter().filter_map(|p| p.value).sum(),
        partial: pairs.iter().any(|p| p.value.is_none()),
        pairs,
    }
}
