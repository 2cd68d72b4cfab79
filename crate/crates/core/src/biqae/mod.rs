//! Bayesian iterative amplitude estimation on a θ grid.

pub mod estimate;
pub mod posterior;

pub use estimate::{
    estimate, estimate_with, median, sweep, AmplitudeOracle, BiqaeConfig, BiqaeResult, CircuitOracle, IdealOracle,
    Round, SweepRow,
};
pub use posterior::{AmplitudePosterior, Hpd, Prior, DEFAULT_GRID_POINTS};
