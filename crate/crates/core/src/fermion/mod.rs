//! Free-fermion backend for the periodic transverse-field Ising chain.
//!
//! After Jordan–Wigner, `H = (i/4) Σ γ_i A_ij γ_j` with Majoranas
//! `γ_{2j} = (∏_{i<j} X_i) Z_j` and `γ_{2j+1} = (∏_{i<j} X_i) Y_j`
//! (0-indexed). Correlators of the parity-even Gibbs state reduce to
//! Pfaffians of thermal two-point functions.

mod model;
mod precise;
mod propagator;
mod r1;
mod sweep;

pub use model::{build_majorana_model, majorana_operator, MajoranaModel, Sector};
pub use propagator::{wick_pfaffian, ThermalPropagator, WickMatrix};
pub use r1::{r1_tfim, r1_tfim_detailed, ParityTreatment, R1Tfim};
pub use sweep::{fig_s1_fields, fig_s1_temperatures, log_slope, sweep_fig_s1, SweepPoint, SweepTable};
