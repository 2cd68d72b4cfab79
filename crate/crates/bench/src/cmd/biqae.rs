use clap::Parser;
use quantum_autonomy::biqae::{median, sweep, BiqaeConfig, Prior, SweepRow};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::GlobalArgs;
use crate::error::{invalid, Result};
use crate::table::ResultTable;

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// True amplitudes to estimate.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub replicas: usize,
    /// Rounds of the exponential schedule.
    #[arg(long, default_value_t = 6)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub epsilon: f64,
    /// Credible mass of the reported interval.
    #[arg(long, default_value_t = 0.95)]
    pub mass: f64,
    /// Gaussian prior mean; needs --prior-std.
    #[arg(long)]
    pub prior_mean: Option<f64>,
    #[arg(long)]
    pub prior_std: Option<f64>,
    /// One row per amplitude instead of one per replica.
    #[arg(long)]
    pub summary: bool,
}

pub const COLUMNS: [&str; 8] = ["a_true", "seed", "a_hat", "abs_error", "ci_lo", "ci_hi", "covered", "oracle_queries"];
pub const SUMMARY_COLUMNS: [&str; 6] =
    ["a_true", "replicas", "mean_a_hat", "median_abs_error", "coverage_pct", "mean_oracle_queries"];

pub fn config(g: &GlobalArgs, a: &Args) -> Result<BiqaeConfig> {
    let prior = match (a.prior_mean, a.prior_std) {
        (None, None) => Prior::Uniform,
        (Some(mean), Some(std)) => Prior::Gaussian { mean, std },
        _ => return invalid("--prior-mean and --prior-std go together"),
    };
    let cfg = BiqaeConfig {
        max_iterations: a.iterations,
        shots: g.shots_or(BiqaeConfig::default().shots),
        epsilon: a.epsilon,
        mass: a.mass,
        prior,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(g: &GlobalArgs, a: &Args, _timing: bool) -> Result<ResultTable> {
    if a.replicas == 0 {
        return invalid("--replicas must be at least 1");
    }
    if let Some(x) = a.a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return invalid(format!("amplitude {x} outside [0,1]"));
    }
    let cfg = config(g, a)?;
    let rows = sweep(&a.a, a.replicas, &cfg, g.noise(0.0)?, g.seed)?;
    if !a.summary {
        return Ok(ResultTable::from_records(&COLUMNS, &rows));
    }
    let mut table = ResultTable::new(&SUMMARY_COLUMNS);
    for &x in &a.a {
        let group: Vec<&SweepRow> = rows.iter().filter(|r| r.a_true == x).collect();
        let n = group.len() as f64;
        let mut errs: Vec<f64> = group.iter().map(|r| r.abs_error).collect();
        table.push(vec![
            json!(x),
            json!(group.len()),
            json!(group.iter().map(|r| r.a_hat).sum::<f64>() / n),
            json!(median(&mut errs)),
            json!(100.0 * group.iter().filter(|r| r.covered).count() as f64 / n),
            json!(group.iter().map(|r| r.oracle_queries as f64).sum::<f64>() / n),
        ]);
    }
    Ok(table)
}
