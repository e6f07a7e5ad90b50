//! Strong-to-weak symmetry breaking diagnostics on mixed states.
//!
//! Four backends compute the same correlators and check each other: dense
//! matrices ([`exact`]), stabilizer tableaux ([`stabilizer`]), the error-chain
//! mapping of the decohered Ising model ([`ising`]) and free Majorana fermions
//! ([`fermion`]).

pub mod bits;
pub mod diag;
pub mod error;
pub mod exact;
pub mod fermion;
pub mod ising;
pub mod linalg;
pub mod pauli;
pub mod rng;
pub mod stabilizer;

pub use diag::{DiagnosticKind, ExtendedReal};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use pauli::{Letter, PauliString};
