//! Dense ground truth for all correlators on up to 12 qubits.

mod channel;
mod density;
mod diagnostics;
pub mod io;
mod purify;
mod states;
mod symmetry;

pub use channel::{apply_channel, apply_channels, PauliChannel};
pub use density::{
    check_dense_size, random_density_matrix, random_pure_state, random_rank_deficient, DensityMatrix,
    MAX_DENSE_QUBITS,
};
pub use diagnostics::{
    all_correlators, fidelity_corr, fidelity_corr_op, holevo_fidelity, relative_entropy,
    relative_entropy_corr, relative_entropy_corr_op, renyi1, renyi1_op, renyi2, renyi2_op,
    trace_distance, trace_distance_corr, trace_distance_corr_op, uhlmann_fidelity, ChargedOp,
    SUPPORT_LEAK_TOL,
};
pub use purify::{canonical_purification, PurifiedVector, MAX_CP_QUBITS};
pub use states::{
    build_reference_state, dephasing_channels, even_ground_state, parity, projected_gibbs,
    sign_free_cp_checks, tfim_hamiltonian, ReferenceKind, SignFreeChecks,
};
pub use symmetry::{check_strong_symmetry, SymmetryCheck, SymmetrySpec};
