//! Superselection-compliant relative entropy of entanglement between two
//! fermionic orbitals.
//!
//! Entropies are in nats throughout.

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod free_fermion;
pub mod lattice;
pub mod oracle;
pub mod random;
pub mod ssr;
pub mod tol;
