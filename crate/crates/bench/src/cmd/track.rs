use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use quantum_autonomy::solvers::Solver;
use quantum_autonomy::tracking::{run_scenario, Scenario, ScenarioKind};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::read_text;
use crate::cli::GlobalArgs;
use crate::error::{invalid, BenchError, Result};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Crossing,
    Clutter,
    Swarm,
}

impl From<Kind> for ScenarioKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Crossing => ScenarioKind::Crossing,
            Kind::Clutter => ScenarioKind::Clutter,
            Kind::Swarm => ScenarioKind::Swarm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverArg {
    Hungarian,
    Gnn,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Hungarian => Solver::Hungarian,
            SolverArg::Gnn => Solver::Gnn,
        }
    }
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Preset scenario; ignored when --scenario is given.
    #[arg(long, value_enum, default_value_t = Kind::Crossing)]
    pub kind: Kind,
    /// Scenario file (JSON, or TOML by extension). Its seed replaces --seed.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SolverArg::Hungarian)]
    pub solver: SolverArg,
    /// Independent runs with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Per-step event rows of a single run instead of the summary.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub n_targets: Option<usize>,
    #[arg(long)]
    pub p_detect: Option<f64>,
    #[arg(long)]
    pub clutter_rate: Option<f64>,
    #[arg(long)]
    pub n_steps: Option<usize>,
}

pub const SUMMARY_COLUMNS: [&str; 10] =
    ["kind", "solver", "seed", "n_targets", "ct", "md", "fa", "steps", "hungarian_objective", "gnn_objective"];
pub const TRACE_COLUMNS: [&str; 5] = ["t", "n_meas", "n_assigned", "md_event", "fa_event"];

pub fn scenario(g: &GlobalArgs, a: &Args) -> Result<Scenario> {
    let mut s = match &a.scenario {
        Some(p) => {
            let text = read_text(p)?;
            let parsed = if p.extension().is_some_and(|e| e == "toml") {
                toml::from_str(&text).map_err(|e| e.to_string())
            } else {
                serde_json::from_str(&text).map_err(|e| e.to_string())
            };
            parsed.map_err(|e| BenchError::Validation(format!("{}: {e}", p.display())))?
        }
        None => Scenario { seed: g.seed, ..Scenario::preset(a.kind.into()) },
    };
    if let Some(n) = a.n_targets {
        s.n_targets = n;
    }
    if let Some(p) = a.p_detect {
        s.p_detect = p;
    }
    if let Some(c) = a.clutter_rate {
        s.clutter_rate = c;
    }
    if let Some(n) = a.n_steps {
        s.n_steps = n;
    }
    s.validate()?;
    Ok(s)
}

pub fn run(g: &GlobalArgs, a: &Args, timing: bool) -> Result<ResultTable> {
    if a.runs == 0 {
        return invalid("--runs must be at least 1");
    }
    if a.trace && a.runs != 1 {
        return invalid("--trace covers a single run");
    }
    let base = scenario(g, a)?;
    let solver: Solver = a.solver.into();
    if a.trace {
        return Ok(ResultTable::from_records(&TRACE_COLUMNS, &run_scenario(&base, solver)?.trace()));
    }
    let mut cols = SUMMARY_COLUMNS.to_vec();
    if timing {
        cols.push("mean_step_ms");
    }
    let mut table = ResultTable::new(&cols);
    for r in 0..a.runs as u64 {
        let s = Scenario { seed: base.seed.wrapping_add(r), ..base.clone() };
        let res = run_scenario(&s, solver)?;
        let mut cells = vec![
            json!(s.kind),
            json!(solver.name()),
            json!(s.seed),
            json!(res.n_targets),
            json!(res.ct),
            json!(res.md),
            json!(res.fa),
            json!(res.steps.len()),
            json!(res.steps.iter().map(|e| e.hungarian_objective).sum::<f64>()),
            json!(res.steps.iter().map(|e| e.gnn_objective).sum::<f64>()),
        ];
        if timing {
            cells.push(json!(res.mean_step_seconds * 1e3));
        }
        table.push(cells);
    }
    Ok(table)
}
