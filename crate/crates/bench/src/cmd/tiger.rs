use clap::{Parser, ValueEnum};
use quantum_autonomy::belief::{CircuitUpdater, EvidenceReadout, GroverMode, IterationRule};
use quantum_autonomy::biqae::BiqaeConfig;
use quantum_autonomy::pomdp::{builtin, run_closed_loop, PlannerConfig, PomdpModel};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{join, read_text};
use crate::cli::GlobalArgs;
use crate::error::{invalid, Result};
use crate::table::ResultTable;

pub const SEQUENCE_4: [usize; 4] = [0, 0, 0, 0];
pub const SEQUENCE_8: [usize; 8] = [0, 0, 0, 1, 1, 1, 0, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evidence {
    Exact,
    Biqae,
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Comma-separated observations, as indices or names. An empty string runs no steps.
    #[arg(long)]
    pub obs: Option<String>,
    /// Built-in sequence used when --obs is absent: 4 or 8.
    #[arg(long, default_value_t = 4)]
    pub steps: usize,
    /// Built-in model (tiger2, tiger4, gridWxH) or a model JSON path.
    #[arg(long, default_value = "tiger2")]
    pub model: String,
    /// How the evidence column is obtained.
    #[arg(long, value_enum, default_value_t = Evidence::Biqae)]
    pub evidence: Evidence,
    /// Grover iterations per update: off, optimal, sqrt, or a count.
    #[arg(long, default_value = "off")]
    pub grover: String,
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,
    #[arg(long, default_value_t = 64)]
    pub rollouts: usize,
}

pub const COLUMNS: [&str; 7] = ["t", "prior", "action", "observation", "posterior", "evidence", "hellinger"];

pub fn load_model(spec: &str) -> Result<PomdpModel<f64>> {
    if spec.ends_with(".json") || spec.contains(std::path::MAIN_SEPARATOR) {
        Ok(PomdpModel::from_json(&read_text(std::path::Path::new(spec))?)?)
    } else {
        Ok(builtin(spec)?)
    }
}

pub fn parse_grover(s: &str) -> Result<GroverMode> {
    Ok(match s {
        "off" => GroverMode::Off,
        "optimal" => GroverMode::Optimal(IterationRule::Standard),
        "sqrt" => GroverMode::Optimal(IterationRule::SquareRoot),
        n => match n.parse() {
            Ok(k) => GroverMode::Fixed(k),
            Err(_) => return invalid(format!("--grover expects off, optimal, sqrt or a count, got `{s}`")),
        },
    })
}

pub fn parse_observations(model: &PomdpModel<f64>, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let idx = match model.observations().iter().position(|o| o == tok) {
                Some(i) => i,
                None => match tok.parse::<usize>() {
                    Ok(i) => i,
                    Err(_) => return invalid(format!("unknown observation `{tok}`")),
                },
            };
            if idx >= model.n_obs() {
                return invalid(format!("observation {idx} out of range for {} symbols", model.n_obs()));
            }
            Ok(idx)
        })
        .collect()
}

pub fn run(g: &GlobalArgs, a: &Args, _timing: bool) -> Result<ResultTable> {
    let model = load_model(&a.model)?;
    let obs = match &a.obs {
        Some(text) => parse_observations(&model, text)?,
        None => match a.steps {
            4 => SEQUENCE_4.to_vec(),
            8 => SEQUENCE_8.to_vec(),
            n => return invalid(format!("no built-in sequence of length {n}; pass --obs")),
        },
    };
    let evidence = match a.evidence {
        Evidence::Exact => EvidenceReadout::Exact,
        Evidence::Biqae => EvidenceReadout::Biqae(BiqaeConfig::default()),
    };
    let mut updater = CircuitUpdater::new(g.shots, g.noise(0.0)?, parse_grover(&a.grover)?, evidence, g.seed);
    let cfg = PlannerConfig::new(a.horizon, a.rollouts, g.seed)?;
    let trace = run_closed_loop(&model, &obs, &cfg, &mut updater)?;
    let mut table = ResultTable::new(&COLUMNS);
    for s in &trace {
        table.push(vec![
            json!(s.t),
            join(&s.prior),
            json!(model.actions()[s.action]),
            json!(model.observations()[s.observation]),
            join(&s.posterior),
            json!(s.evidence),
            json!(s.hellinger),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observation_tokens() {
        let m = builtin::<f64>("tiger2").unwrap();
        let names = m.observations().to_vec();
        let text = format!("0, {} ,1", names[1]);
        assert_eq!(parse_observations(&m, &text).unwrap(), vec![0, 1, 1]);
        assert!(parse_observations(&m, "").unwrap().is_empty());
        assert!(parse_observations(&m, "7").is_err());
        assert!(parse_observations(&m, "growl").is_err());
    }

    #[test]
    fn grover_modes() {
        assert_eq!(parse_grover("3").unwrap(), GroverMode::Fixed(3));
        assert_eq!(parse_grover("sqrt").unwrap(), GroverMode::Optimal(IterationRule::SquareRoot));
        assert!(parse_grover("lots").is_err());
    }
}
