use thiserror::Error;

/// Violations of the density-matrix invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Dimension { rows: usize, cols: usize, expected: usize },
    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace:.15}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("unknown basis label {0:?}")]
    UnknownBasis(String),
    #[error("malformed density-matrix document: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("orbital index {index} out of range for {n_orbitals} orbitals")]
    OrbitalOutOfRange { index: usize, n_orbitals: usize },
    #[error("kept orbitals must be distinct (got {0} twice)")]
    RepeatedOrbital(usize),
    #[error("vector of length {len} does not match a Fock space of {n_orbitals} orbitals")]
    Dimension { len: usize, n_orbitals: usize },
    #[error("unknown operator tag {0:?}")]
    UnknownOperator(String),
    #[error("operator tag {0:?} has no built-in matrix")]
    CustomOperator(String),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntanglementError {
    #[error("state lacks the symmetries required by every closed formula: {0}")]
    InsufficientSymmetry(String),
    #[error("sector {sector} is rank deficient (p{index} = {weight:.3e}); use the oracle")]
    DegenerateSector {
        sector: &'static str,
        index: usize,
        weight: f64,
    },
    #[error("formula precondition violated: {0}")]
    Precondition(String),
    #[error("spectrum was taken in the {found} basis, expected {expected}")]
    BasisMismatch {
        found: &'static str,
        expected: &'static str,
    },
    #[error("state has not been projected for the {0} basis (off-block norm {1:.3e})")]
    NotProjected(&'static str, f64),
    #[error("negative weight p{index} = {weight:.3e}")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("weights sum to {0}, expected 1")]
    Normalization(f64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(
        "KKT solve not certified after {iterations} iterations \
         (feasibility {feasibility:.3e}, stationarity {stationarity:.3e})"
    )]
    NotCertified {
        iterations: usize,
        feasibility: f64,
        stationarity: f64,
    },
    #[error("correlation matrix is unphysical: {0}")]
    Unphysical(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeFermionError {
    #[error("filling fraction {0} outside the open interval (0, 1)")]
    Filling(f64),
    #[error("distance must be at least 1")]
    ZeroDistance,
    #[error("{n} particles do not fit on {sites} sites")]
    Overfilled { n: usize, sites: usize },
    #[error("site index {index} out of range for {sites} sites")]
    SiteOutOfRange { index: usize, sites: usize },
    #[error("periodic chain with {n} particles on {sites} sites has an open Fermi shell")]
    OpenShell { n: usize, sites: usize },
    #[error("distance cap {cap} below the required minimum {min}")]
    CapTooSmall { cap: usize, min: usize },
    #[error("entanglement still nonzero at the cap distance {0}")]
    NotDisentangledWithinCap(usize),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("sector dimension {dim} exceeds the budget {budget}")]
    SectorTooLarge { dim: usize, budget: usize },
    #[error("Lanczos did not converge (residual {residual:.3e} after {iterations} iterations)")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("ground state is {0}-fold degenerate; request the symmetrized mixture instead")]
    DegenerateGroundState(usize),
    #[error("site index {index} out of range for {sites} sites")]
    SiteOutOfRange { index: usize, sites: usize },
    #[error("sites of a pair must differ (got {0} twice)")]
    SamePair(usize),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
}
