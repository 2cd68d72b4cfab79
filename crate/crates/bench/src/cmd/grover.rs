use clap::{Parser, ValueEnum};
use quantum_autonomy::belief::{
    amplified_posterior, amplified_probability, build_minimal_tiger_circuit, optimal_iterations_with, GroverSetup,
    IterationRule,
};
use quantum_autonomy::pomdp::{hellinger, Belief};
use quantum_autonomy::rng;
use quantum_autonomy::sim::run_noisy;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cli::GlobalArgs;
use crate::error::{invalid, Result};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Standard,
    Sqrt,
}

impl From<Rule> for IterationRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Standard => IterationRule::Standard,
            Rule::Sqrt => IterationRule::SquareRoot,
        }
    }
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Prior over the two tiger states.
    #[arg(long, value_delimiter = ',', default_values_t = [0.97, 0.03])]
    pub prior: Vec<f64>,
    /// Observation to amplify (0 hear-left, 1 hear-right).
    #[arg(long, default_value_t = 1)]
    pub obs: usize,
    #[arg(long, default_value_t = 5)]
    pub k_max: usize,
    /// Rule used for the k_star column.
    #[arg(long, value_enum, default_value_t = Rule::Standard)]
    pub rule: Rule,
}

pub const COLUMNS: [&str; 9] = [
    "k",
    "base",
    "amplified",
    "law",
    "factor",
    "hellinger",
    "sampled_amplified",
    "sampled_hellinger",
    "k_star",
];

pub fn run(g: &GlobalArgs, a: &Args, _timing: bool) -> Result<ResultTable> {
    if a.prior.len() != 2 {
        return invalid("--prior needs exactly two probabilities");
    }
    if a.obs > 1 {
        return invalid("--obs must be 0 or 1");
    }
    let prior = Belief::new(a.prior.clone())?;
    let enc = build_minimal_tiger_circuit(&prior)?;
    let (bayes, base) = enc.posterior(a.obs)?;
    let setup = GroverSetup::for_observation(&enc, a.obs)?;
    let k_star = optimal_iterations_with(base, a.rule.into()).ok();
    let noise = g.noise(0.0)?;
    let shots = g.shots_or(10_000);
    let mut table = ResultTable::new(&COLUMNS);
    for k in 0..=a.k_max {
        let amplified = setup.success_probability(&setup.amplify(k));
        let (post, _) = amplified_posterior(&enc, a.obs, k)?;
        let counts = run_noisy(&setup.circuit(k), &noise, shots, &mut rng::stream(g.seed, k as u64))?;
        let hits: u64 = counts
            .iter()
            .filter(|&(idx, _)| setup.marked().iter().all(|&(q, b)| ((idx >> q) & 1 == 1) == b))
            .map(|(_, n)| n)
            .sum();
        let sampled_h = match enc.posterior_from_counts(&counts, a.obs) {
            Ok(b) => json!(hellinger(b.probs(), bayes.probs())?),
            Err(_) => Value::Null,
        };
        table.push(vec![
            json!(k),
            json!(base),
            json!(amplified),
            json!(amplified_probability(base, k)),
            json!(amplified / base),
            json!(hellinger(post.probs(), bayes.probs())?),
            json!(hits as f64 / counts.total() as f64),
            sampled_h,
            json!(k_star == Some(k)),
        ]);
    }
    Ok(table)
}
