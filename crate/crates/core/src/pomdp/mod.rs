//! Finite POMDPs, exact Bayes filtering and root-level lookahead planning.

pub mod model;
pub mod planner;
pub mod update;

pub use model::{builtin, corridor_tiger, grid, tiger, tiger_with_accuracy, Belief, ModelFile, PomdpModel};
pub use planner::{
    expected_reward, q_values, qbrl_plan, run_closed_loop, run_closed_loop_from, BeliefUpdater, ExactUpdater,
    PlannerConfig, StepTrace,
};
pub use update::{belief_update, evidence_probability, hellinger, kl_divergence, predict};
