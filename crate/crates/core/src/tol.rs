//! Numerical tolerances shared across the crate.

/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN: f64 = 1e-12;

/// Allowed deviation of the trace from one.
pub const TRACE: f64 = 1e-12;

/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD: f64 = -1e-10;

/// Eigenvalues at or below this are treated as zero when deciding support.
pub const SUPPORT: f64 = 1e-14;

/// Default Frobenius-norm threshold for symmetry detection.
pub const SYMMETRY: f64 = 1e-10;

/// Minimum partial-transpose eigenvalue accepted as PPT.
pub const PPT: f64 = -1e-10;

/// Sector weights must sum to one within this.
pub const SPECTRUM_SUM: f64 = 1e-10;

/// Sector weights may dip this far below zero from rounding.
pub const SPECTRUM_NEGATIVE: f64 = -1e-12;
