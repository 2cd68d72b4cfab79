use std::path::Path;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::{GlobalArgs, OutputArgs};
use crate::error::{invalid, BenchError, Result};
use crate::table::{self, Format};
use crate::{execute, Runner};

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    /// Small replica and seed counts for a fast smoke run.
    #[arg(long)]
    pub quick: bool,
}

struct Job {
    file: &'static str,
    experiment: &'static str,
    argv: Vec<&'static str>,
    shots: Option<u64>,
}

fn job(file: &'static str, experiment: &'static str, argv: &[&'static str]) -> Job {
    Job { file, experiment, argv: argv.to_vec(), shots: None }
}

fn jobs(quick: bool) -> Vec<Job> {
    let mut v = vec![
        job("tiger_t4", "tiger", &["--steps", "4"]),
        job("tiger_t8", "tiger", &["--steps", "8"]),
        job("grover", "grover", &[]),
        job("mtda_sizes", "mtda", &[]),
        job("track_crossing_trace", "track", &["--kind", "crossing", "--trace"]),
    ];
    if quick {
        v.extend([
            job("biqae", "biqae", &["--a", "0.1,0.5", "--replicas", "4"]),
            job("biqae_summary", "biqae", &["--a", "0.1,0.5", "--replicas", "4", "--summary"]),
            job("qaoa_sweep", "qaoa", &["--ks", "1,2", "--ps", "1,2", "--seeds", "2", "--max-iterations", "30"]),
            job(
                "qaoa_summary",
                "qaoa",
                &["--ks", "1,2", "--ps", "1,2", "--seeds", "2", "--max-iterations", "30", "--view", "summary"],
            ),
            job("track_crossing", "track", &["--kind", "crossing", "--runs", "2"]),
            job("track_clutter", "track", &["--kind", "clutter", "--runs", "2"]),
            job("track_swarm", "track", &["--kind", "swarm", "--runs", "2"]),
            Job { shots: Some(2000), ..job("zne", "zne", &["--seeds", "2", "--deep-shots", "2000"]) },
        ]);
    } else {
        v.extend([
            job("biqae", "biqae", &[]),
            job("biqae_summary", "biqae", &["--summary"]),
            job("qaoa_sweep", "qaoa", &[]),
            job("qaoa_summary", "qaoa", &["--view", "summary"]),
            job("track_crossing", "track", &["--kind", "crossing", "--runs", "10"]),
            job("track_clutter", "track", &["--kind", "clutter", "--runs", "10"]),
            job("track_swarm", "track", &["--kind", "swarm", "--runs", "10"]),
            job("zne", "zne", &[]),
        ]);
    }
    v
}

fn parse<A: Parser>(experiment: &str, argv: &[&str]) -> Result<A> {
    A::try_parse_from(std::iter::once(experiment).chain(argv.iter().copied()))
        .map_err(|e| BenchError::Validation(e.to_string()))
}

fn dispatch<A: Parser + Serialize + DeserializeOwned>(
    job: &Job,
    global: &GlobalArgs,
    out: &OutputArgs,
    runner: Runner<A>,
) -> Result<(Vec<u8>, usize, String)> {
    let args: A = parse(job.experiment, &job.argv)?;
    let (bytes, table, hash) = execute(job.experiment, global, &args, out, runner)?;
    Ok((bytes, table.rows.len(), hash))
}

pub fn run(global: &GlobalArgs, a: &Args, out: &OutputArgs) -> Result<()> {
    let Some(dir) = out.out.as_deref() else {
        return invalid("repro needs --out <directory>");
    };
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let ext = match out.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut entries = Vec::new();
    for j in jobs(a.quick) {
        let g = GlobalArgs { shots: j.shots.or(global.shots), ..global.clone() };
        let (bytes, rows, hash) = match j.experiment {
            "tiger" => dispatch(&j, &g, out, super::tiger::run)?,
            "grover" => dispatch(&j, &g, out, super::grover::run)?,
            "biqae" => dispatch(&j, &g, out, super::biqae::run)?,
            "qaoa" => dispatch(&j, &g, out, super::qaoa::run)?,
            "mtda" => dispatch(&j, &g, out, super::mtda::run)?,
            "track" => dispatch(&j, &g, out, super::track::run)?,
            "zne" => dispatch(&j, &g, out, super::zne::run)?,
            other => unreachable!("no experiment {other}"),
        };
        let file = format!("{}.{ext}", j.file);
        table::emit(&bytes, Some(&dir.join(&file)))?;
        entries.push(json!({
            "name": j.file,
            "experiment": j.experiment,
            "args": j.argv,
            "file": file,
            "rows": rows,
            "config_sha256": hash,
        }));
    }
    let manifest = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": global.seed,
        "quick": a.quick,
        "tables": entries,
    });
    let path: &Path = &dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    table::emit(text.as_bytes(), Some(path))
}
