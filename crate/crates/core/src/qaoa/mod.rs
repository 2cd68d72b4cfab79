//! QAOA with fixed-parameter-count angle schedules.

pub mod circuit;
pub mod optimize;
pub mod schedule;

pub use circuit::{build_qaoa_circuit, expectation, expectation_from_state, qaoa_state};
pub use optimize::{
    fpc_sensitivity_sweep, nelder_mead, normalised, optimize, physical_angles, summarize, warm_start_transfer,
    Minimum, NelderMeadConfig, QaoaConfig, QaoaResult, SweepRow, SweepSummary, TransferReport, TRANSFER_THRESHOLD,
};
pub use schedule::{Basis, FpcSchedule};
