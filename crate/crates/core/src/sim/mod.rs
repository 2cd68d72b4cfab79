//! Dense statevector simulator: gates, circuits, sampling and trajectory noise.

mod circuit;
mod counts;
mod gate;
mod noise;
mod state;

pub use circuit::Circuit;
pub use counts::{format_bits, Counts};
pub use gate::Gate;
pub use noise::{run_noisy, NoiseModel};
pub use state::StateVector;
