use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::scenario::{generate_frame, Frame, Scenario};
use crate::error::Result;
use crate::mtda::{build_cost_matrix, kalman_update, Measurement, MotionModel, Track, DEFAULT_GATE};
use crate::solvers::{gnn_solve, hungarian_solve, Solver};

/// Consecutive associations needed to confirm a track.
pub const CONFIRM_HITS: usize = 3;
/// Consecutive misses a track may coast through before deletion.
pub const MAX_COAST: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct ManagedTrack {
    pub id: usize,
    pub track: Track,
    pub hits: usize,
    pub misses: usize,
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEvents {
    pub t: usize,
    pub n_meas: usize,
    pub n_live: usize,
    pub n_assigned: usize,
    pub md: usize,
    pub fa: usize,
    pub objective: f64,
    pub hungarian_objective: f64,
    pub gnn_objective: f64,
}

#[derive(Debug, Clone)]
pub struct Tracker {
    pub tracks: Vec<ManagedTrack>,
    pub motion: MotionModel,
    pub gate: f64,
    pub solver: Solver,
    pub md_total: usize,
    pub fa_total: usize,
}

impl Tracker {
    pub fn new(tracks: Vec<Track>, motion: MotionModel, solver: Solver) -> Self {
        let tracks = tracks
            .into_iter()
            .enumerate()
            .map(|(id, track)| ManagedTrack { id, track, hits: 0, misses: 0, confirmed: false })
            .collect();
        Self { tracks, motion, gate: DEFAULT_GATE, solver, md_total: 0, fa_total: 0 }
    }

    /// One track per target, started at the true state one step before the
    /// first frame so the first prediction lands on frame 0.
    pub fn from_truth(s: &Scenario, solver: Solver) -> Result<Self> {
        let var = s.meas_var();
        let p0 = [[var, 0.0, 0.0, 0.0], [0.0, var, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let tracks = (0..s.n_targets).map(|i| Track::new(s.state_at(i, -1.0), p0)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(tracks, MotionModel { dt: 1.0, q: s.process_noise }, solver))
    }

    pub fn confirmed(&self) -> usize {
        self.tracks.iter().filter(|t| t.confirmed).count()
    }

    /// Predict, gate, associate, update, then apply confirmation and coasting.
    pub fn step(&mut self, t: usize, measurements: &[Measurement]) -> Result<StepEvents> {
        let predicted: Vec<Track> = self.tracks.iter().map(|m| self.motion.predict(&m.track)).collect::<Result<_>>()?;
        let cost = build_cost_matrix(&predicted, measurements, self.gate, None)?;
        let assignment = self.solver.solve(&cost)?;
        let hungarian_objective = match self.solver {
            Solver::Hungarian => assignment.objective,
            _ => hungarian_solve(&cost)?.objective,
        };
        let gnn_objective = match self.solver {
            Solver::Gnn => assignment.objective,
            _ => gnn_solve(&cost)?.objective,
        };
        let mut hit = vec![None; predicted.len()];
        for &(i, j) in &assignment.pairs {
            hit[i] = Some(j);
        }
        for ((m, pred), h) in self.tracks.iter_mut().zip(predicted).zip(hit) {
            match h {
                Some(j) => {
                    m.track = kalman_update(&pred, &measurements[j])?;
                    m.hits += 1;
                    m.misses = 0;
                    if m.hits >= CONFIRM_HITS {
                        m.confirmed = true;
                    }
                }
                None => {
                    m.track = pred;
                    m.hits = 0;
                    m.misses += 1;
                }
            }
        }
        let n_live = self.tracks.len();
        self.tracks.retain(|m| m.misses <= MAX_COAST);
        let (md, fa) = (assignment.missed.len(), assignment.false_alarms.len());
        self.md_total += md;
        self.fa_total += fa;
        Ok(StepEvents {
            t,
            n_meas: measurements.len(),
            n_live,
            n_assigned: assignment.n_assigned(),
            md,
            fa,
            objective: assignment.objective,
            hungarian_objective,
            gnn_objective,
        })
    }
}

/// Per-step trace row as written to CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub n_meas: usize,
    pub n_assigned: usize,
    pub md_event: usize,
    pub fa_event: usize,
}

impl From<&StepEvents> for TraceRow {
    fn from(e: &StepEvents) -> Self {
        Self { t: e.t, n_meas: e.n_meas, n_assigned: e.n_assigned, md_event: e.md, fa_event: e.fa }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub solver: Solver,
    pub n_targets: usize,
    /// Confirmed tracks alive after the final step.
    pub ct: usize,
    pub md: usize,
    pub fa: usize,
    pub mean_step_seconds: f64,
    pub steps: Vec<StepEvents>,
}

impl ScenarioResult {
    pub fn trace(&self) -> Vec<TraceRow> {
        self.steps.iter().map(TraceRow::from).collect()
    }
}

pub fn run_frames(s: &Scenario, solver: Solver) -> Result<(Vec<Frame>, ScenarioResult)> {
    s.validate()?;
    let frames: Vec<Frame> = (0..s.n_steps).map(|t| generate_frame(s, t)).collect::<Result<_>>()?;
    let mut tracker = Tracker::from_truth(s, solver)?;
    let mut steps = Vec::with_capacity(s.n_steps);
    let mut elapsed = 0.0;
    for f in &frames {
        let start = Instant::now();
        steps.push(tracker.step(f.t, &f.measurements)?);
        elapsed += start.elapsed().as_secs_f64();
    }
    let res = ScenarioResult {
        solver,
        n_targets: s.n_targets,
        ct: tracker.confirmed(),
        md: tracker.md_total,
        fa: tracker.fa_total,
        mean_step_seconds: elapsed / s.n_steps as f64,
        steps,
    };
    Ok((frames, res))
}

pub fn run_scenario(s: &Scenario, solver: Solver) -> Result<ScenarioResult> {
    run_frames(s, solver).map(|(_, r)| r)
}
