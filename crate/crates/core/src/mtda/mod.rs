//! Multi-target data association: Kalman filtering, gated costs, QUBO and Ising forms.

pub mod cost;
pub mod io;
pub mod kalman;
pub mod linalg;
pub mod qubo;

pub use cost::{association_cost, build_cost_matrix, Assignment, AssociationCost, CostMatrix, DEFAULT_GATE};
pub use io::{read_triplets, triplets_to_string, write_triplets, AssociationScenario};
pub use kalman::{kalman_predict, kalman_update, Measurement, MotionModel, Track, H_POS};
pub use qubo::{
    build_qubo, default_lambda, direct_energy, n_var_formula, nonzero_formula_with_slack, objective_part,
    pair_nonzero_formula, to_ising, IsingInstance, QuboInstance, Variable,
};
