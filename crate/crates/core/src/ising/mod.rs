//! Decohered Ising model through its error-chain statistical mechanics.

mod correlators;
mod enumerate;
mod lattice;
mod rbim;
mod spinsum;

pub use correlators::{
    annealed_beta, bond_t, corr_ratio, p_v_loop_rep, r1_closed_form_1d, r1_quenched,
    r2_annealed, sample_chain, Estimate, QuenchedMode,
};
pub use enumerate::{p_v_enumerate, SyndromeTable, MAX_ENUM_LINKS};
pub use lattice::{boundary, ErrorChain, Lattice, Syndrome};
pub use rbim::{p_v_rbim_2d, p_v_rbim_from_disorder, RbimDisorder, MAX_RBIM_PLAQUETTES};
pub use spinsum::{spin_sum, spin_sum_brute_force, BondWeight};
