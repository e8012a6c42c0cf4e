//! Basis conventions for the two-orbital Fock space.
//!
//! Global fermionic mode order is `(A↑, A↓, B↑, B↓)`, and for `d` orbitals
//! `(1↑, 1↓, 2↑, 2↓, …)`. A configuration is the ordered product of creation
//! operators in that order acting on the vacuum. The local single-orbital
//! basis is `|0⟩, |↑⟩, |↓⟩, |↑↓⟩` (local index `n↑ + 2·n↓`), and the product
//! index of `|a⟩⊗|b⟩` is `4·a + b`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;

use super::{Vector16, C64};

/// Occupation of a single spatial orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LocalState {
    Empty,
    Up,
    Down,
    Double,
}

impl LocalState {
    pub const ALL: [LocalState; 4] = [Self::Empty, Self::Up, Self::Down, Self::Double];

    pub fn index(self) -> usize {
        match self {
            Self::Empty => 0,
            Self::Up => 1,
            Self::Down => 2,
            Self::Double => 3,
        }
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    /// `(n↑, n↓)`.
    pub fn occupations(self) -> (u8, u8) {
        let i = self.index() as u8;
        (i & 1, (i >> 1) & 1)
    }

    pub fn particles(self) -> u8 {
        let (u, d) = self.occupations();
        u + d
    }

    /// Twice the magnetization.
    pub fn sz2(self) -> i8 {
        let (u, d) = self.occupations();
        u as i8 - d as i8
    }
}

impl fmt::Display for LocalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Empty => "0",
            Self::Up => "↑",
            Self::Down => "↓",
            Self::Double => "↑↓",
        })
    }
}

/// The sixteen product labels `|a⟩⊗|b⟩` of two orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccupationBasis;

impl OccupationBasis {
    pub const DIM: usize = 16;
    pub const LABEL: &'static str = "occupation-A↑A↓B↑B↓";

    pub fn index(a: LocalState, b: LocalState) -> usize {
        4 * a.index() + b.index()
    }

    pub fn label(index: usize) -> (LocalState, LocalState) {
        assert!(index < Self::DIM, "basis index {index} out of range");
        (LocalState::from_index(index / 4), LocalState::from_index(index % 4))
    }

    /// Bit `k` set when mode `k` of `(A↑, A↓, B↑, B↓)` is occupied.
    pub fn mode_mask(index: usize) -> u64 {
        modes::mask_of_index(index, 2)
    }

    pub fn from_mode_mask(mask: u64) -> usize {
        modes::index_of_mask(mask, 2)
    }

    pub fn quantum_numbers(index: usize) -> QuantumNumbers {
        let (a, b) = Self::label(index);
        QuantumNumbers {
            n: a.particles() + b.particles(),
            sz2: a.sz2() + b.sz2(),
            spin2: None,
            n_a: Some(a.particles()),
            n_b: Some(b.particles()),
        }
    }

    pub fn unit(index: usize) -> Vector16 {
        let mut v = Vector16::zeros();
        v[index] = C64::new(1.0, 0.0);
        v
    }
}

/// Conversions between Fock-space indices and occupation bitmasks for `d`
/// orbitals, orbital 0 being the most significant base-4 digit.
pub mod modes {
    pub fn mask_of_index(index: usize, n_orbitals: usize) -> u64 {
        let mut mask = 0u64;
        for orb in 0..n_orbitals {
            let digit = (index >> (2 * (n_orbitals - 1 - orb))) & 3;
            mask |= ((digit & 1) as u64) << (2 * orb);
            mask |= (((digit >> 1) & 1) as u64) << (2 * orb + 1);
        }
        mask
    }

    pub fn index_of_mask(mask: u64, n_orbitals: usize) -> usize {
        let mut index = 0usize;
        for orb in 0..n_orbitals {
            index = (index << 2) | local_digit(mask, orb);
        }
        index
    }

    /// Local index `n↑ + 2·n↓` of orbital `orb` within `mask`.
    pub fn local_digit(mask: u64, orb: usize) -> usize {
        ((mask >> (2 * orb)) & 3) as usize
    }

    /// Parity of the permutation that brings the occupied modes of `mask`
    /// from ascending order into the sequence given by `order`.
    ///
    /// `order` must list every mode exactly once.
    pub fn reorder_is_odd(mask: u64, order: &[usize]) -> bool {
        let mut placed = 0u64;
        let mut inversions = 0u32;
        for &mode in order {
            if mask >> mode & 1 == 1 {
                let above = if mode + 1 >= 64 { 0 } else { !0u64 << (mode + 1) };
                inversions += (placed & above).count_ones();
                placed |= 1 << mode;
            }
        }
        inversions % 2 == 1
    }

    /// Sign picked up by `c_mode` (or `c†_mode`) from the Jordan-Wigner string.
    pub fn jw_sign(mask: u64, mode: usize) -> f64 {
        let below = (1u64 << mode) - 1;
        if (mask & below).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Quantum numbers `(N, Sᶻ, |S⃗|, N_A, N_B)`; spins are stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n: u8,
    pub sz2: i8,
    pub spin2: Option<u8>,
    pub n_a: Option<u8>,
    pub n_b: Option<u8>,
}

impl QuantumNumbers {
    pub fn sz(&self) -> f64 {
        self.sz2 as f64 / 2.0
    }

    /// Eigenvalue of S⃗², `S(S+1)`.
    pub fn spin_squared(&self) -> Option<f64> {
        self.spin2.map(|s2| {
            let s = s2 as f64 / 2.0;
            s * (s + 1.0)
        })
    }
}

/// Which superselection rule a symmetry eigenbasis is adapted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisVariant {
    /// Local particle number.
    #[serde(rename = "N-SSR")]
    Nssr,
    /// Local parity: `Ψ₆, Ψ₇` become `(|0,↑↓⟩ ∓ |↑↓,0⟩)/√2`.
    #[serde(rename = "P-SSR")]
    Pssr,
}

impl BasisVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::Nssr => "N-SSR",
            Self::Pssr => "P-SSR",
        }
    }
}

/// The sixteen fully symmetric two-orbital states `Ψ₁ … Ψ₁₆`.
#[derive(Debug, Clone)]
pub struct SymmetryEigenbasis {
    variant: BasisVariant,
    vectors: [Vector16; 16],
    labels: [QuantumNumbers; 16],
}

impl SymmetryEigenbasis {
    pub fn new(variant: BasisVariant) -> Self {
        use LocalState::*;
        let e = |a, b| OccupationBasis::unit(OccupationBasis::index(a, b));
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let qn = |n, sz2, spin2, na: Option<u8>, nb: Option<u8>| QuantumNumbers {
            n,
            sz2,
            spin2: Some(spin2),
            n_a: na,
            n_b: nb,
        };

        let mut vectors = [
            e(Empty, Empty),
            e(Empty, Up),
            e(Up, Empty),
            e(Empty, Down),
            e(Down, Empty),
            e(Double, Empty),
            e(Empty, Double),
            (e(Up, Down) - e(Down, Up)) * h,
            (e(Up, Down) + e(Down, Up)) * h,
            e(Up, Up),
            e(Down, Down),
            e(Double, Up),
            e(Up, Double),
            e(Double, Down),
            e(Down, Double),
            e(Double, Double),
        ];
        let mut labels = [
            qn(0, 0, 0, Some(0), Some(0)),
            qn(1, 1, 1, Some(0), Some(1)),
            qn(1, 1, 1, Some(1), Some(0)),
            qn(1, -1, 1, Some(0), Some(1)),
            qn(1, -1, 1, Some(1), Some(0)),
            qn(2, 0, 0, Some(2), Some(0)),
            qn(2, 0, 0, Some(0), Some(2)),
            qn(2, 0, 0, Some(1), Some(1)),
            qn(2, 0, 2, Some(1), Some(1)),
            qn(2, 2, 2, Some(1), Some(1)),
            qn(2, -2, 2, Some(1), Some(1)),
            qn(3, 1, 1, Some(2), Some(1)),
            qn(3, 1, 1, Some(1), Some(2)),
            qn(3, -1, 1, Some(2), Some(1)),
            qn(3, -1, 1, Some(1), Some(2)),
            qn(4, 0, 0, Some(2), Some(2)),
        ];

        if variant == BasisVariant::Pssr {
            vectors[5] = (e(Empty, Double) - e(Double, Empty)) * h;
            vectors[6] = (e(Empty, Double) + e(Double, Empty)) * h;
            labels[5] = qn(2, 0, 0, None, None);
            labels[6] = qn(2, 0, 0, None, None);
        }

        Self {
            variant,
            vectors,
            labels,
        }
    }

    pub fn variant(&self) -> BasisVariant {
        self.variant
    }

    /// `Ψ_{k+1}` for zero-based `k`.
    pub fn vector(&self, k: usize) -> &Vector16 {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vector16; 16] {
        &self.vectors
    }

    pub fn quantum_numbers(&self, k: usize) -> &QuantumNumbers {
        &self.labels[k]
    }
}
