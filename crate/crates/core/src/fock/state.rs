use nalgebra::{DMatrix, Matrix4};

use super::basis::SymmetryEigenbasis;
use super::{Matrix16, Vector16, C64};
use crate::error::StateError;
use crate::tol;

/// A two-orbital density matrix in the occupation basis.
///
/// Construction through [`TwoOrbitalState::new`] enforces Hermiticity, unit
/// trace and positivity within the crate tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOrbitalState {
    matrix: Matrix16,
}

impl TwoOrbitalState {
    pub fn new(matrix: Matrix16) -> Result<Self, StateError> {
        validate(&DMatrix::from_iterator(16, 16, matrix.iter().copied()))?;
        Ok(Self { matrix })
    }

    /// Skips validation. Only for matrices that are states by construction
    /// (pinchings, convex combinations) up to rounding.
    pub(crate) fn from_matrix_unchecked(matrix: Matrix16) -> Self {
        Self { matrix }
    }

    pub fn from_dmatrix(matrix: &DMatrix<C64>) -> Result<Self, StateError> {
        if matrix.nrows() != 16 || matrix.ncols() != 16 {
            return Err(StateError::Dimension {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                expected: 16,
            });
        }
        Self::new(Matrix16::from_fn(|i, j| matrix[(i, j)]))
    }

    /// `|ψ⟩⟨ψ|` for a nonzero vector; the vector is normalized first.
    pub fn from_pure(psi: &Vector16) -> Self {
        let norm = psi.norm();
        assert!(norm > 0.0, "cannot build a state from the zero vector");
        let v = psi / C64::new(norm, 0.0);
        Self {
            matrix: v * v.adjoint(),
        }
    }

    /// Diagonal state in the occupation basis.
    pub fn from_diagonal(weights: &[f64; 16]) -> Result<Self, StateError> {
        let mut m = Matrix16::zeros();
        for (i, w) in weights.iter().enumerate() {
            m[(i, i)] = C64::new(*w, 0.0);
        }
        Self::new(m)
    }

    /// `Σ qᵢ |Ψᵢ⟩⟨Ψᵢ|`.
    pub fn from_sector_weights(basis: &SymmetryEigenbasis, q: &[f64; 16]) -> Result<Self, StateError> {
        let mut m = Matrix16::zeros();
        for (k, w) in q.iter().enumerate() {
            let v = basis.vector(k);
            m += v * v.adjoint() * C64::new(*w, 0.0);
        }
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Matrix16::identity() / C64::new(16.0, 0.0),
        }
    }

    /// `ρ_A ⊗ ρ_B` under the label factorization `|a,b⟩ ↦ |a⟩⊗|b⟩`.
    pub fn product(rho_a: &Matrix4<C64>, rho_b: &Matrix4<C64>) -> Result<Self, StateError> {
        Self::new(Matrix16::from_fn(|i, j| rho_a[(i / 4, j / 4)] * rho_b[(i % 4, j % 4)]))
    }

    pub fn matrix(&self) -> &Matrix16 {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix16 {
        self.matrix
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_iterator(16, 16, self.matrix.iter().copied())
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn diagonal(&self) -> [f64; 16] {
        std::array::from_fn(|i| self.matrix[(i, i)].re)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.to_dmatrix())
    }

    pub fn expectation(&self, op: &Matrix16) -> C64 {
        (self.matrix * op).trace()
    }

    /// `⟨u|ρ|v⟩`.
    pub fn matrix_element(&self, u: &Vector16, v: &Vector16) -> C64 {
        (u.adjoint() * self.matrix * v)[(0, 0)]
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        Self {
            matrix: self.matrix * C64::new(w, 0.0) + other.matrix * C64::new(1.0 - w, 0.0),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.matrix - other.matrix).norm()
    }
}

/// Checks the density-matrix invariants on a square matrix of any size.
pub fn validate(m: &DMatrix<C64>) -> Result<(), StateError> {
    if m.nrows() != m.ncols() {
        return Err(StateError::Dimension {
            rows: m.nrows(),
            cols: m.ncols(),
            expected: m.nrows(),
        });
    }
    let n = m.nrows();
    let mut deviation: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if deviation > tol::HERMITIAN {
        return Err(StateError::NotHermitian { deviation });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(StateError::TraceNotOne { trace });
    }
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    if min_eigenvalue < tol::PSD {
        return Err(StateError::NotPositive { min_eigenvalue });
    }
    Ok(())
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Transposes the B-factor: `((a,b),(a',b')) ↦ ((a,b'),(a',b))`.
pub fn partial_transpose_matrix(m: &Matrix16) -> Matrix16 {
    Matrix16::from_fn(|row, col| {
        let (a, b_prime) = (row / 4, row % 4);
        let (a_prime, b) = (col / 4, col % 4);
        m[(4 * a + b, 4 * a_prime + b_prime)]
    })
}

pub fn partial_transpose(rho: &TwoOrbitalState) -> Matrix16 {
    partial_transpose_matrix(rho.matrix())
}

/// `Tr ρ(ln ρ − ln σ)` in nats; `+∞` when the support of ρ is not inside
/// the support of σ.
pub fn relative_entropy(rho: &TwoOrbitalState, sigma: &TwoOrbitalState) -> f64 {
    relative_entropy_matrices(&rho.to_dmatrix(), &sigma.to_dmatrix())
}

pub fn relative_entropy_matrices(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let half = C64::new(0.5, 0.0);
    let er = ((rho + rho.adjoint()) * half).symmetric_eigen();
    let es = ((sigma + sigma.adjoint()) * half).symmetric_eigen();
    let overlap = er.eigenvectors.adjoint() * &es.eigenvectors;

    let mut value = 0.0;
    let mut leaked = 0.0;
    for (i, &lambda) in er.eigenvalues.iter().enumerate() {
        if lambda <= tol::SUPPORT {
            continue;
        }
        value += lambda * lambda.ln();
        for (j, &mu) in es.eigenvalues.iter().enumerate() {
            let w = lambda * overlap[(i, j)].norm_sqr();
            if mu > tol::SUPPORT {
                value -= w * mu.ln();
            } else {
                leaked += w;
            }
        }
    }
    if leaked > 1e-12 {
        f64::INFINITY
    } else {
        value
    }
}

/// von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > tol::SUPPORT)
        .map(|l| -l * l.ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis::{BasisVariant, LocalState, OccupationBasis};

    fn singlet() -> TwoOrbitalState {
        let basis = SymmetryEigenbasis::new(BasisVariant::Nssr);
        TwoOrbitalState::from_pure(basis.vector(7))
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = Matrix16::identity() / C64::new(16.0, 0.0);
        m[(0, 1)] = C64::new(0.01, 0.0);
        assert!(matches!(TwoOrbitalState::new(m), Err(StateError::NotHermitian { .. })));

        let m = Matrix16::identity() / C64::new(15.0, 0.0);
        assert!(matches!(TwoOrbitalState::new(m), Err(StateError::TraceNotOne { .. })));

        let mut d = [0.0; 16];
        d[0] = 1.5;
        d[1] = -0.5;
        assert!(matches!(
            TwoOrbitalState::from_diagonal(&d),
            Err(StateError::NotPositive { .. })
        ));
    }

    #[test]
    fn diagonal_state_is_invariant_under_partial_transpose() {
        let d: [f64; 16] = std::array::from_fn(|i| (i + 1) as f64 / 136.0);
        let rho = TwoOrbitalState::from_diagonal(&d).unwrap();
        assert_eq!(partial_transpose(&rho), *rho.matrix());
    }

    #[test]
    fn singlet_partial_transpose_has_negative_half() {
        let ev = hermitian_eigenvalues(&DMatrix::from_iterator(
            16,
            16,
            partial_transpose(&singlet()).iter().copied(),
        ));
        assert!((ev[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_states_stay_positive_under_partial_transpose() {
        let a = Matrix4::from_fn(|i, j| {
            if i == j {
                C64::new([0.1, 0.2, 0.3, 0.4][i], 0.0)
            } else if (i, j) == (1, 2) {
                C64::new(0.05, 0.1)
            } else if (i, j) == (2, 1) {
                C64::new(0.05, -0.1)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let b = Matrix4::from_fn(|i, j| {
            if i == j {
                C64::new(0.25, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let rho = TwoOrbitalState::product(&a, &b).unwrap();
        let pt = partial_transpose(&rho);
        let expected = TwoOrbitalState::product(&a, &b.transpose()).unwrap();
        assert!((pt - expected.matrix()).norm() < 1e-15);
        let ev = hermitian_eigenvalues(&DMatrix::from_iterator(16, 16, pt.iter().copied()));
        assert!(ev[0] > -1e-14);
    }

    #[test]
    fn relative_entropy_reference_values() {
        let rho = singlet();
        assert!(relative_entropy(&rho, &rho).abs() < 1e-12);
        let mixed = TwoOrbitalState::maximally_mixed();
        assert!((relative_entropy(&rho, &mixed) - 16f64.ln()).abs() < 1e-12);
        assert_eq!(relative_entropy(&mixed, &rho), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_of_diagonal_states_is_kl() {
        let p: [f64; 16] = std::array::from_fn(|i| (1 + i) as f64 / 136.0);
        let q: [f64; 16] = std::array::from_fn(|i| (16 - i) as f64 / 136.0);
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        let rho = TwoOrbitalState::from_diagonal(&p).unwrap();
        let sigma = TwoOrbitalState::from_diagonal(&q).unwrap();
        assert!((relative_entropy(&rho, &sigma) - kl).abs() < 1e-13);
    }

    #[test]
    fn vacuum_has_zero_entropy() {
        let rho = TwoOrbitalState::from_pure(&OccupationBasis::unit(OccupationBasis::index(
            LocalState::Empty,
            LocalState::Empty,
        )));
        assert!(von_neumann_entropy(&rho.to_dmatrix()).abs() < 1e-15);
    }
}
