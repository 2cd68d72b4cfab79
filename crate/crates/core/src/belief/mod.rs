//! Quantum belief-update circuits and amplitude amplification.

pub mod circuits;
pub mod grover;
pub mod layout;
pub mod provider;

pub use circuits::{
    build_corridor4_circuit, build_direct_circuit, build_full_belief_circuit, build_minimal_circuit,
    build_minimal_tiger_circuit, encode, load_distribution, EncodedBelief, FullBeliefCircuit,
};
pub use grover::{
    amplified_posterior, amplified_probability, optimal_iterations, optimal_iterations_with, GroverSetup,
    IterationRule,
};
pub use layout::{BeliefCircuitLayout, Registers};
pub use provider::{CircuitUpdater, EvidenceReadout, GroverMode};
