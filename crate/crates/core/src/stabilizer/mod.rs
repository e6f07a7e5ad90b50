//! Stabilizer-state backend: canonical purifications, syndrome-class
//! diagnostics under Pauli noise, percolation ensembles and preparation
//! circuits.

mod circuit;
mod frame;
mod group;
mod percolation;
mod syndrome;
mod tableau;

pub use circuit::{
    cluster_partition, emit_cp_circuit, simulate_circuit, simulate_circuit_seeded, CircuitIR,
    EmitStrategy, Gate, Qubit, Side,
};
pub use frame::{canonical_purification_generators, canonical_purification_of, DestabilizerFrame};
pub use group::{same_group, StabilizerMixedState};
pub use percolation::{
    cluster_state, clusters_from_chain, find_crossings, percolation_r1, percolation_r1_at_distance,
    percolation_r1_mean, percolation_sample, ClusterLabels, PercolationConfig,
};
pub use syndrome::{
    commuting_gibbs_r1, commuting_gibbs_r1_weighted, diagnostics_from_syndromes, syndrome_of,
    unravel_pauli_channel, SyndromeDistribution, DEFAULT_CLASS_BUDGET, MAX_GIBBS_RANK,
};
pub use tableau::{conj_cx, conj_h, conj_s, random_stabilizer_state, Tableau};
