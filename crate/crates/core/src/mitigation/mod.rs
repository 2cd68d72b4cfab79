//! Error mitigation as composable transformations of measurement counts.

mod fold;
mod pipeline;
mod readout;
mod richardson;

pub use fold::fold;
pub use pipeline::{
    bell_circuit, deep_bell_circuit, parity, zne_study, MitigationPipeline, PipelineEstimate, Stage, ZneRow,
    DEFAULT_SCALES,
};
pub use readout::{
    apply_readout_error, mitigate_frequencies, readout_mitigate, AssignmentMatrix, Mitigated, ReadoutError,
};
pub use richardson::{linear_extrapolate, richardson_extrapolate};
