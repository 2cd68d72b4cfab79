use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use quantum_autonomy::mtda::{
    build_qubo, n_var_formula, pair_nonzero_formula, triplets_to_string, AssociationScenario, CostMatrix,
    QuboInstance,
};
use quantum_autonomy::rng;
use quantum_autonomy::solvers::{brute_force_qubo, gnn_solve, hungarian_solve};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{millis, read_text};
use crate::cli::GlobalArgs;
use crate::error::{invalid, BenchError, Result};
use crate::table::ResultTable;

pub const DEFAULT_SIZES: &str = "2x3,3x5,5x8,8x12,10x15,15x23,20x30";
/// Exhaustive reference only below this many variables.
pub const BRUTE_LIMIT: usize = 20;
const MISS_FRACTION: f64 = 0.7;

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Comma-separated `NxM` problem sizes with random dense costs.
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_SIZES)]
    pub sizes: Vec<String>,
    /// Association scenario JSON; replaces --sizes with one row.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Write the QUBO of the scenario (or the first size) as triplets.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Penalty weight; defaults to 1.5 times the largest cost.
    #[arg(long)]
    pub lambda: Option<f64>,
}

const COLUMNS: [&str; 10] = [
    "n",
    "m",
    "n_var",
    "n_var_formula",
    "nonzeros",
    "nonzeros_formula",
    "lambda",
    "hungarian_objective",
    "gnn_objective",
    "brute_objective",
];
const TIMING_COLUMNS: [&str; 3] = ["build_ms", "hungarian_ms", "gnn_ms"];

pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let parsed = s.trim().split_once('x').and_then(|(n, m)| Some((n.parse().ok()?, m.parse().ok()?)));
    match parsed {
        Some((n, m)) if n > 0 && m > 0 => Ok((n, m)),
        _ => invalid(format!("bad size `{s}`, expected NxM with N, M >= 1")),
    }
}

/// Dense costs in `[0,10)` with miss and false-alarm costs at 0.7 of the maximum.
pub fn random_costs(n: usize, m: usize, seed: u64, index: u64) -> Result<CostMatrix> {
    let mut r = rng::stream(seed, index);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| r.random_range(0.0..10.0)).collect()).collect();
    let max = rows.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    Ok(CostMatrix::from_rows(&rows, MISS_FRACTION * max, MISS_FRACTION * max)?)
}

fn row(cost: &CostMatrix, lambda: Option<f64>, timing: bool) -> Result<(Vec<Value>, QuboInstance)> {
    let (n, m) = (cost.n_tracks(), cost.n_meas());
    let t0 = Instant::now();
    let q = build_qubo(cost, lambda)?;
    let build = t0.elapsed();
    let t1 = Instant::now();
    let h = hungarian_solve(cost)?;
    let hung = t1.elapsed();
    let t2 = Instant::now();
    let gnn = gnn_solve(cost)?;
    let greedy = t2.elapsed();
    let brute = if q.n_var() <= BRUTE_LIMIT { json!(brute_force_qubo(&q)?.1) } else { Value::Null };
    let mut cells = vec![
        json!(n),
        json!(m),
        json!(q.n_var()),
        json!(n_var_formula(n, m)),
        json!(q.nonzero_count()),
        json!(pair_nonzero_formula(n, m)),
        json!(q.lambda),
        json!(h.objective),
        json!(gnn.objective),
        brute,
    ];
    if timing {
        cells.extend([millis(build), millis(hung), millis(greedy)]);
    }
    Ok((cells, q))
}

pub fn run(g: &GlobalArgs, a: &Args, timing: bool) -> Result<ResultTable> {
    let mut cols: Vec<&str> = COLUMNS.to_vec();
    if timing {
        cols.extend(TIMING_COLUMNS);
    }
    let costs: Vec<CostMatrix> = match &a.scenario {
        Some(p) => vec![AssociationScenario::from_json(&read_text(p)?)?.cost_matrix()?],
        None => {
            let sizes = a.sizes.iter().map(|s| parse_size(s)).collect::<Result<Vec<_>>>()?;
            sizes.iter().enumerate().map(|(i, &(n, m))| random_costs(n, m, g.seed, i as u64)).collect::<Result<_>>()?
        }
    };
    let mut table = ResultTable::new(&cols);
    let mut first = None;
    for cost in &costs {
        let (cells, q) = row(cost, a.lambda, timing)?;
        table.push(cells);
        first.get_or_insert(q);
    }
    if let (Some(path), Some(q)) = (&a.export, &first) {
        std::fs::write(path, triplets_to_string(q)).map_err(|e| BenchError::io(path, e))?;
    }
    Ok(table)
}
