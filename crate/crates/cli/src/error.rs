use std::fmt;

use orbent::error::{EntanglementError, FreeFermionError, LatticeError, OracleError, StateError};

/// Process exit codes. Usage errors are reported by clap with code 2.
pub mod exit {
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INSUFFICIENT_SYMMETRY: i32 = 3;
    pub const DEGENERATE_SECTOR: i32 = 4;
    pub const VERIFICATION: i32 = 5;
    pub const DEGENERATE_GROUND_STATE: i32 = 6;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Input(String),
    Usage(String),
    Entanglement(EntanglementError),
    Lattice(LatticeError),
    FreeFermion(FreeFermionError),
    Oracle(OracleError),
    /// Formula and oracle disagree beyond the tolerance; the report was
    /// still written.
    Verification(f64),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let entanglement = |e: &EntanglementError| match e {
            EntanglementError::InsufficientSymmetry(_) | EntanglementError::Precondition(_) => {
                exit::INSUFFICIENT_SYMMETRY
            }
            EntanglementError::DegenerateSector { .. } => exit::DEGENERATE_SECTOR,
            _ => exit::FAILURE,
        };
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Entanglement(e) => entanglement(e),
            Self::Lattice(LatticeError::DegenerateGroundState(_)) => exit::DEGENERATE_GROUND_STATE,
            Self::Lattice(LatticeError::Entanglement(e)) => entanglement(e),
            Self::FreeFermion(FreeFermionError::Entanglement(e)) => entanglement(e),
            Self::Verification(_) => exit::VERIFICATION,
            _ => exit::FAILURE,
        }
    }

    fn hint(&self) -> Option<&'static str> {
        match self.exit_code() {
            exit::INSUFFICIENT_SYMMETRY => {
                Some("no closed formula applies; run `orbent oracle-verify --input FILE` for the oracle value, or `orbent inspect` for the symmetry report")
            }
            exit::DEGENERATE_SECTOR => Some("run `orbent oracle-verify --input FILE` for the oracle value"),
            exit::DEGENERATE_GROUND_STATE => Some("pair states of one ground-state representative are ill-defined; change the parameters or the boundary"),
            _ => None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(m) | Self::Input(m) | Self::Usage(m) => f.write_str(m)?,
            Self::Entanglement(e) => write!(f, "{e}")?,
            Self::Lattice(e) => write!(f, "{e}")?,
            Self::FreeFermion(e) => write!(f, "{e}")?,
            Self::Oracle(e) => write!(f, "{e}")?,
            Self::Verification(max) => write!(f, "formula and oracle differ by up to {max:.3e} (limit 1e-6)")?,
        }
        if let Some(h) = self.hint() {
            write!(f, "\nhint: {h}")?;
        }
        Ok(())
    }
}

impl From<EntanglementError> for CliError {
    fn from(e: EntanglementError) -> Self {
        Self::Entanglement(e)
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        Self::Lattice(e)
    }
}

impl From<FreeFermionError> for CliError {
    fn from(e: FreeFermionError) -> Self {
        Self::FreeFermion(e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        Self::Oracle(e)
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        Self::Input(e.to_string())
    }
}
