//! Classical simulation toolkit for quantum-assisted autonomy.
//!
//! Generic numeric code is parameterised over [`Scalar`] (`f32` or `f64`);
//! the aliases at the crate root fix the scalar to `f64`.

pub mod belief;
pub mod biqae;
pub mod error;
pub mod mitigation;
pub mod mtda;
pub mod pomdp;
pub mod qaoa;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod solvers;
pub mod tracking;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type StateVector = sim::StateVector<f64>;
pub type StateVector32 = sim::StateVector<f32>;
pub type Gate = sim::Gate<f64>;
pub type Circuit = sim::Circuit<f64>;
pub type PomdpModel = pomdp::PomdpModel<f64>;
pub type Belief = pomdp::Belief<f64>;
pub type AmplitudePosterior = biqae::AmplitudePosterior<f64>;
pub type GroverSetup = belief::GroverSetup<f64>;
