//! Reader and writer for the density-matrix JSON document
//! `{"dim": 16, "basis": "occupation-A↑A↓B↑B↓", "re": [[…]], "im": [[…]]}`.

use serde::{Deserialize, Serialize};

use super::basis::OccupationBasis;
use super::state::TwoOrbitalState;
use super::{Matrix16, C64};
use crate::error::StateError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixDocument {
    pub dim: usize,
    pub basis: String,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl DensityMatrixDocument {
    pub fn from_state(rho: &TwoOrbitalState) -> Self {
        let m = rho.matrix();
        Self {
            dim: 16,
            basis: OccupationBasis::LABEL.to_string(),
            re: (0..16).map(|i| (0..16).map(|j| m[(i, j)].re).collect()).collect(),
            im: Some((0..16).map(|i| (0..16).map(|j| m[(i, j)].im).collect()).collect()),
        }
    }

    pub fn to_state(&self) -> Result<TwoOrbitalState, StateError> {
        if self.basis != OccupationBasis::LABEL {
            return Err(StateError::UnknownBasis(self.basis.clone()));
        }
        if self.dim != 16 {
            return Err(StateError::Dimension {
                rows: self.dim,
                cols: self.dim,
                expected: 16,
            });
        }
        check_shape("re", &self.re)?;
        if let Some(im) = &self.im {
            check_shape("im", im)?;
        }
        let m = Matrix16::from_fn(|i, j| {
            let im = self.im.as_ref().map_or(0.0, |im| im[i][j]);
            C64::new(self.re[i][j], im)
        });
        TwoOrbitalState::new(m)
    }
}

fn check_shape(name: &str, rows: &[Vec<f64>]) -> Result<(), StateError> {
    if rows.len() != 16 || rows.iter().any(|r| r.len() != 16) {
        return Err(StateError::Schema(format!("field {name:?} must be a 16x16 array")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(StateError::Schema(format!(
            "field {name:?} contains non-finite entries"
        )));
    }
    Ok(())
}

pub fn read_state(text: &str) -> Result<TwoOrbitalState, StateError> {
    let doc: DensityMatrixDocument = serde_json::from_str(text).map_err(|e| StateError::Schema(e.to_string()))?;
    doc.to_state()
}

pub fn write_state(rho: &TwoOrbitalState) -> String {
    serde_json::to_string_pretty(&DensityMatrixDocument::from_state(rho)).expect("plain data serializes")
}

/// Reads either one document or an array of documents.
pub fn read_states(text: &str) -> Result<Vec<TwoOrbitalState>, StateError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| StateError::Schema(e.to_string()))?;
    let docs: Vec<DensityMatrixDocument> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|d| vec![d])
    }
    .map_err(|e| StateError::Schema(e.to_string()))?;
    docs.iter().map(DensityMatrixDocument::to_state).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis::{BasisVariant, SymmetryEigenbasis};

    #[test]
    fn round_trip() {
        let basis = SymmetryEigenbasis::new(BasisVariant::Pssr);
        let v = basis.vector(5) + basis.vector(2) * C64::new(0.0, 0.5);
        let rho = TwoOrbitalState::from_pure(&v);
        let back = read_state(&write_state(&rho)).unwrap();
        assert!(rho.distance(&back) < 1e-15);
    }

    #[test]
    fn missing_imaginary_part_means_real() {
        let mut re = vec![vec![0.0; 16]; 16];
        re[0][0] = 1.0;
        let text = serde_json::json!({"dim": 16, "basis": OccupationBasis::LABEL, "re": re}).to_string();
        assert_eq!(read_state(&text).unwrap().trace(), 1.0);
    }

    #[test]
    fn rejects_asymmetric_and_wrong_trace() {
        let mut re = vec![vec![0.0; 16]; 16];
        re[0][0] = 1.0;
        re[0][1] = 0.1;
        let text = serde_json::json!({"dim": 16, "basis": OccupationBasis::LABEL, "re": re}).to_string();
        assert!(matches!(read_state(&text), Err(StateError::NotHermitian { .. })));

        let mut re = vec![vec![0.0; 16]; 16];
        re[0][0] = 0.9;
        let text = serde_json::json!({"dim": 16, "basis": OccupationBasis::LABEL, "re": re}).to_string();
        assert!(matches!(read_state(&text), Err(StateError::TraceNotOne { .. })));

        let text = serde_json::json!({"dim": 16, "basis": "spin", "re": [[1.0]]}).to_string();
        assert!(matches!(read_state(&text), Err(StateError::UnknownBasis(_))));
    }
}
