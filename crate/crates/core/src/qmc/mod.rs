//! Quantum Markov chains built from stochastic ensembles.
//!
//! A source becomes a dynamical system `(A, Θ, ρ)` together with an
//! operational partition `γ` read off the symbol states. Iterating the
//! lifting `E†_{γ,Θ}` produces the joint correlations `ρ_k`, which coincide
//! with the ensemble states `ρ_{S^k}`; their entropies per symbol estimate
//! the dynamical entropy. i.i.d. and Markov sources use the commutative
//! system on `C^N`, general sources the free Fock space over `C^N`.

mod fock;
mod markov;
mod partition;
mod report;

pub use fock::{
    check_weights, final_symbol, pruned, total_weight, FockDynSystem, LiftedTerm, WeightedStrings,
};
pub use markov::{MarkovCorrelations, MarkovDynSystem};
pub use partition::OperationalPartition;
pub use report::{
    default_kmax, dynamical_entropy, dynamical_entropy_with, joint_correlations, EntropyOptions,
    EntropyReport, EntropyRow, JointCorrelations,
};
