use clap::{Parser, ValueEnum};
use quantum_autonomy::mitigation::{bell_circuit, deep_bell_circuit, zne_study, MitigationPipeline, Stage};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::GlobalArgs;
use crate::error::{invalid, Result};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Bell,
    Deep,
    Both,
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = Study::Both)]
    pub study: Study,
    /// Odd noise scale factors.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 3, 5])]
    pub scales: Vec<usize>,
    /// Extrapolation polynomial order.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Repetitions with consecutive seeds.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Two-qubit gates in the deep circuit.
    #[arg(long, default_value_t = 60)]
    pub depth: usize,
    /// Two-qubit error rate of the deep circuit when --noise-p2q is absent.
    #[arg(long, default_value_t = 0.05)]
    pub deep_p2q: f64,
    /// Shots per scale for the deep circuit.
    #[arg(long, default_value_t = 10_000)]
    pub deep_shots: u64,
}

pub const BELL_P2Q: f64 = 0.02;
pub const BELL_SHOTS: u64 = 100_000;

pub const COLUMNS: [&str; 11] = [
    "study",
    "seed",
    "p2q",
    "two_qubit_gates",
    "shots",
    "ideal",
    "raw",
    "mitigated",
    "raw_error",
    "mitigated_error",
    "improved",
];

/// Entangling gates actually placed by the deep circuit builder.
pub fn deep_gates(depth: usize) -> usize {
    1 + 2 * depth.saturating_sub(1).div_ceil(2)
}

pub fn run(g: &GlobalArgs, a: &Args, _timing: bool) -> Result<ResultTable> {
    if a.seeds == 0 {
        return invalid("--seeds must be at least 1");
    }
    let pipeline = MitigationPipeline::new().with(Stage::Zne { scales: a.scales.clone(), order: a.order });
    pipeline.validate()?;
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|i| g.seed.wrapping_add(i)).collect();
    let mut studies = Vec::new();
    if matches!(a.study, Study::Bell | Study::Both) {
        studies.push(("bell", bell_circuit(), 1, g.noise(BELL_P2Q)?, g.shots_or(BELL_SHOTS)));
    }
    if matches!(a.study, Study::Deep | Study::Both) {
        studies.push(("deep", deep_bell_circuit(a.depth), deep_gates(a.depth), g.noise(a.deep_p2q)?, a.deep_shots));
    }
    let mut table = ResultTable::new(&COLUMNS);
    for (name, circuit, gates, noise, shots) in studies {
        for r in zne_study(&circuit, noise, shots, &pipeline, &seeds)? {
            table.push(vec![
                json!(name),
                json!(r.seed),
                json!(noise.p2q),
                json!(gates),
                json!(shots),
                json!(r.ideal),
                json!(r.raw),
                json!(r.mitigated),
                json!(r.raw_error),
                json!(r.mitigated_error),
                json!(r.improved),
            ]);
        }
    }
    Ok(table)
}
