use clap::{Parser, ValueEnum};
use quantum_autonomy::mtda::{build_qubo, to_ising, CostMatrix, QuboInstance};
use quantum_autonomy::qaoa::{fpc_sensitivity_sweep, optimize, summarize, warm_start_transfer, Basis, QaoaConfig};
use quantum_autonomy::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::GlobalArgs;
use crate::error::{invalid, Result};
use crate::table::ResultTable;

/// Largest instance the statevector sweep accepts.
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    /// One row per (k, p, seed).
    Sweep,
    /// Mean objective and feasibility per (k, p).
    Summary,
    /// Optimised angles replayed on the noisy gate-level circuit.
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisArg {
    Polynomial,
    Trigonometric,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Polynomial => Basis::Polynomial,
            BasisArg::Trigonometric => Basis::Trigonometric,
        }
    }
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Coefficients per angle family.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub ks: Vec<usize>,
    /// Circuit depths.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
    pub ps: Vec<usize>,
    /// Optimiser seeds per (k, p), counted up from the master seed.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    #[arg(long, default_value_t = 2)]
    pub n_tracks: usize,
    #[arg(long, default_value_t = 3)]
    pub n_meas: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::Polynomial)]
    pub basis: BasisArg,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    /// Outcomes decoded from each histogram.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, value_enum, default_value_t = View::Sweep)]
    pub view: View,
}

pub const SWEEP_COLUMNS: [&str; 7] = ["k", "p", "n_params", "seed", "objective", "quality_pct", "feasible"];
pub const SUMMARY_COLUMNS: [&str; 5] = ["k", "p", "n_params", "mean_objective", "feasibility_pct"];
pub const TRANSFER_COLUMNS: [&str; 8] =
    ["k", "p", "seed", "sim_objective", "sim_quality_pct", "noisy_objective", "noisy_quality_pct", "recommended"];

/// Association instance with negative log-likelihood-style costs so the
/// optimum is negative and quality ratios are defined.
pub fn instance(n_tracks: usize, n_meas: usize, seed: u64) -> Result<QuboInstance> {
    let mut r = rng::seeded(seed);
    let rows: Vec<Vec<f64>> =
        (0..n_tracks).map(|_| (0..n_meas).map(|_| r.random_range(-10.0..-1.0)).collect()).collect();
    Ok(build_qubo(&CostMatrix::from_rows(&rows, 0.0, 0.0)?, None)?)
}

pub fn run(g: &GlobalArgs, a: &Args, _timing: bool) -> Result<ResultTable> {
    if a.ks.is_empty() || a.ps.is_empty() || a.seeds == 0 {
        return invalid("--ks, --ps and --seeds must be non-empty");
    }
    if a.ks.contains(&0) || a.ps.contains(&0) {
        return invalid("k and p must be at least 1");
    }
    let qubo = instance(a.n_tracks, a.n_meas, g.seed)?;
    if qubo.n_var() > MAX_QUBITS {
        return invalid(format!("{} variables exceed the {MAX_QUBITS}-qubit sweep cap", qubo.n_var()));
    }
    let mut base = QaoaConfig { basis: a.basis.into(), shots: g.shots_or(4096), top_k: a.top_k, ..Default::default() };
    base.optimizer.max_iterations = a.max_iterations;
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|i| g.seed.wrapping_add(i)).collect();
    match a.view {
        View::Sweep => Ok(ResultTable::from_records(&SWEEP_COLUMNS, &fpc_sensitivity_sweep(&qubo, &a.ks, &a.ps, &seeds, &base)?)),
        View::Summary => {
            let rows = fpc_sensitivity_sweep(&qubo, &a.ks, &a.ps, &seeds, &base)?;
            Ok(ResultTable::from_records(&SUMMARY_COLUMNS, &summarize(&rows)))
        }
        View::Transfer => {
            let ising = to_ising(&qubo);
            let noise = g.noise(0.01)?;
            let mut table = ResultTable::new(&TRANSFER_COLUMNS);
            for &k in &a.ks {
                for &p in &a.ps {
                    for &seed in &seeds {
                        let cfg = QaoaConfig { k, p, ..base.clone() };
                        let res = optimize(&ising, &cfg, &mut rng::seeded(seed))?;
                        let rep =
                            warm_start_transfer(&qubo, &res, noise, cfg.shots, cfg.top_k, &mut rng::stream(seed, 1))?;
                        let pct = |q: Option<f64>| json!(q.map(|q| 100.0 * q));
                        table.push(vec![
                            json!(k),
                            json!(p),
                            json!(seed),
                            json!(rep.sim.energy),
                            pct(rep.sim.quality),
                            json!(rep.noisy.energy),
                            pct(rep.noisy.quality),
                            json!(rep.recommended),
                        ]);
                    }
                }
            }
            Ok(table)
        }
    }
}
