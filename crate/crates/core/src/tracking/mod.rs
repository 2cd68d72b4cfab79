//! End-to-end multi-target tracking on simulated scenarios.

mod scenario;
mod tracker;

pub use scenario::{generate_frame, Frame, Scenario, ScenarioKind};
pub use tracker::{
    run_frames, run_scenario, ManagedTrack, ScenarioResult, StepEvents, TraceRow, Tracker, CONFIRM_HITS, MAX_COAST,
};
