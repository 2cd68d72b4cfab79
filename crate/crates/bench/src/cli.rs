use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use quantum_autonomy::sim::NoiseModel;
use serde::{Deserialize, Serialize};

use crate::cmd;
use crate::error::Result;
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "qa-bench", version, about = "Reproducible benchmark tables for the quantum-autonomy toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags that change results; part of the config hash.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalArgs {
    /// Master RNG seed.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Shot count; each experiment has its own default.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    /// Two-qubit depolarising probability; each experiment has its own default.
    #[arg(long = "noise-p2q", global = true)]
    pub noise_p2q: Option<f64>,
    /// Single-qubit depolarising probability.
    #[arg(long = "noise-p1q", global = true, default_value_t = 0.0)]
    pub noise_p1q: f64,
}

impl GlobalArgs {
    pub fn noise(&self, default_p2q: f64) -> Result<NoiseModel> {
        Ok(NoiseModel::new(self.noise_p1q, self.noise_p2q.unwrap_or(default_p2q))?)
    }

    pub fn shots_or(&self, default: u64) -> u64 {
        self.shots.unwrap_or(default)
    }
}

/// Flags that only affect where and how results are written.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (directory for `repro`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// TOML file overriding flags: top-level keys for global flags, `[command]` tables for the rest.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Add wall-clock columns and metadata.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-loop belief filtering on a POMDP along an observation sequence.
    Tiger(cmd::tiger::Args),
    /// Amplitude amplification of the evidence branch for k = 0..k_max.
    Grover(cmd::grover::Args),
    /// Bayesian amplitude estimation accuracy and coverage sweep.
    Biqae(cmd::biqae::Args),
    /// Fourier/polynomial-parameterised QAOA sweep on an association QUBO.
    Qaoa(cmd::qaoa::Args),
    /// Association QUBO sizes and classical solver comparison.
    Mtda(cmd::mtda::Args),
    /// Multi-target tracking on a synthetic scenario.
    Track(cmd::track::Args),
    /// Zero-noise extrapolation study.
    Zne(cmd::zne::Args),
    /// Regenerate every table into a directory.
    Repro(cmd::repro::Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tiger(_) => "tiger",
            Command::Grover(_) => "grover",
            Command::Biqae(_) => "biqae",
            Command::Qaoa(_) => "qaoa",
            Command::Mtda(_) => "mtda",
            Command::Track(_) => "track",
            Command::Zne(_) => "zne",
            Command::Repro(_) => "repro",
        }
    }
}
