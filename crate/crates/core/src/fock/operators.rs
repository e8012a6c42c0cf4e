use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use super::basis::{modes, OccupationBasis};
use super::{Matrix16, C64};
use crate::error::FockError;

/// Dense fermionic ladder operators on the Fock space of `n_orbitals`
/// spatial orbitals (two modes each).
#[derive(Debug, Clone)]
pub struct FockSpace {
    n_orbitals: usize,
}

impl FockSpace {
    pub fn new(n_orbitals: usize) -> Self {
        assert!(n_orbitals <= 7, "dense Fock operators limited to 7 orbitals");
        Self { n_orbitals }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.n_orbitals)
    }

    /// `c_mode` in the index basis, with the Jordan-Wigner string.
    pub fn annihilation(&self, mode: usize) -> DMatrix<f64> {
        let dim = self.dim();
        let mut c = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mask = modes::mask_of_index(col, self.n_orbitals);
            if mask >> mode & 1 == 1 {
                let row = modes::index_of_mask(mask ^ (1 << mode), self.n_orbitals);
                c[(row, col)] = modes::jw_sign(mask, mode);
            }
        }
        c
    }

    pub fn creation(&self, mode: usize) -> DMatrix<f64> {
        self.annihilation(mode).transpose()
    }

    pub fn number(&self, mode: usize) -> DMatrix<f64> {
        let c = self.annihilation(mode);
        c.transpose() * c
    }

    pub fn total_number(&self) -> DMatrix<f64> {
        (0..2 * self.n_orbitals).fold(DMatrix::zeros(self.dim(), self.dim()), |acc, k| acc + self.number(k))
    }

    /// Ŝᶻ restricted to the listed orbitals.
    pub fn spin_z(&self, orbitals: &[usize]) -> DMatrix<f64> {
        let mut sz = DMatrix::zeros(self.dim(), self.dim());
        for &o in orbitals {
            sz += (self.number(2 * o) - self.number(2 * o + 1)) * 0.5;
        }
        sz
    }

    /// Ŝ⁺ restricted to the listed orbitals.
    pub fn spin_plus(&self, orbitals: &[usize]) -> DMatrix<f64> {
        let mut sp = DMatrix::zeros(self.dim(), self.dim());
        for &o in orbitals {
            sp += self.creation(2 * o) * self.annihilation(2 * o + 1);
        }
        sp
    }

    /// S⃗² = Ŝ⁻Ŝ⁺ + Ŝᶻ(Ŝᶻ + 1) restricted to the listed orbitals.
    pub fn spin_squared(&self, orbitals: &[usize]) -> DMatrix<f64> {
        let sp = self.spin_plus(orbitals);
        let sz = self.spin_z(orbitals);
        let id = DMatrix::identity(self.dim(), self.dim());
        sp.transpose() * &sp + &sz * (&sz + id)
    }
}

/// Semantic tag of a two-orbital operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorTag {
    Number,
    SpinZ,
    SpinSquared,
    NumberA,
    NumberB,
    Parity,
    Custom(String),
}

impl OperatorTag {
    pub fn is_observable(&self) -> bool {
        !matches!(self, Self::Custom(_))
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Number => f.write_str("N"),
            Self::SpinZ => f.write_str("Sz"),
            Self::SpinSquared => f.write_str("S2"),
            Self::NumberA => f.write_str("NA"),
            Self::NumberB => f.write_str("NB"),
            Self::Parity => f.write_str("parity"),
            Self::Custom(name) => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for OperatorTag {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "n" => Ok(Self::Number),
            "Sz" | "sz" => Ok(Self::SpinZ),
            "S2" | "s2" => Ok(Self::SpinSquared),
            "NA" | "na" => Ok(Self::NumberA),
            "NB" | "nb" => Ok(Self::NumberB),
            "parity" | "P" => Ok(Self::Parity),
            other => match other.strip_prefix("custom:") {
                Some(name) => Ok(Self::Custom(name.to_string())),
                None => Err(FockError::UnknownOperator(other.to_string())),
            },
        }
    }
}

/// A 16×16 operator on two orbitals together with its tag.
#[derive(Debug, Clone)]
pub struct TwoOrbitalOperator {
    pub matrix: Matrix16,
    pub tag: OperatorTag,
}

impl TwoOrbitalOperator {
    pub fn custom(name: impl Into<String>, matrix: Matrix16) -> Self {
        Self {
            matrix,
            tag: OperatorTag::Custom(name.into()),
        }
    }
}

/// Assembles the built-in observables from fermionic ladder operators.
pub fn build_operator(tag: &OperatorTag) -> Result<TwoOrbitalOperator, FockError> {
    let space = FockSpace::new(2);
    let real = match tag {
        OperatorTag::Number => space.total_number(),
        OperatorTag::SpinZ => space.spin_z(&[0, 1]),
        OperatorTag::SpinSquared => space.spin_squared(&[0, 1]),
        OperatorTag::NumberA => space.number(0) + space.number(1),
        OperatorTag::NumberB => space.number(2) + space.number(3),
        OperatorTag::Parity => {
            let n = space.total_number();
            DMatrix::from_fn(16, 16, |i, j| {
                if i == j {
                    if n[(i, i)].round() as i64 % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    0.0
                }
            })
        }
        OperatorTag::Custom(name) => return Err(FockError::CustomOperator(name.clone())),
    };
    Ok(TwoOrbitalOperator {
        matrix: Matrix16::from_fn(|i, j| C64::new(real[(i, j)], 0.0)),
        tag: tag.clone(),
    })
}

/// Fermionic exchange of the two orbitals, `|a,b⟩ ↦ (-1)^{n_a n_b} |b,a⟩`.
pub fn reflection() -> Matrix16 {
    let mut r = Matrix16::zeros();
    for i in 0..OccupationBasis::DIM {
        let (a, b) = OccupationBasis::label(i);
        let j = OccupationBasis::index(b, a);
        let sign = if (a.particles() * b.particles()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        r[(j, i)] = C64::new(sign, 0.0);
    }
    r
}
