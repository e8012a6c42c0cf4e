//! The 16-dimensional two-orbital Fock space and its linear algebra.

use nalgebra::{SMatrix, SVector};

pub mod basis;
pub mod json;
pub mod operators;
pub mod state;
pub mod trace;

pub type C64 = num_complex::Complex64;
pub type Matrix16 = SMatrix<C64, 16, 16>;
pub type Vector16 = SVector<C64, 16>;

pub use basis::{BasisVariant, LocalState, OccupationBasis, QuantumNumbers, SymmetryEigenbasis};
pub use operators::{build_operator, reflection, FockSpace, OperatorTag, TwoOrbitalOperator};
pub use state::{
    hermitian_eigenvalues, partial_transpose, partial_transpose_matrix, relative_entropy, relative_entropy_matrices,
    von_neumann_entropy, TwoOrbitalState,
};
pub use trace::{partial_trace, partial_trace_keep, ManyOrbitalState};

/// Symmetric eigenbasis for the given variant.
pub fn build_symmetry_basis(variant: BasisVariant) -> SymmetryEigenbasis {
    SymmetryEigenbasis::new(variant)
}
