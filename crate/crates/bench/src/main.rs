mod cli;
mod cmd;
mod config;
mod error;
mod table;

use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;

use cli::{Cli, Command, GlobalArgs, OutputArgs};
use config::{fingerprint, overlay, ConfigFile};
use error::Result;
use table::{Metadata, ResultTable};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error[{}]: {e}", e.category());
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.output.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let global = overlay(&cli.global, &file.globals(), "global")?;
    let name = cli.command.name();
    let section = file.section(name);
    let out = &cli.output;
    match &cli.command {
        Command::Tiger(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::tiger::run),
        Command::Grover(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::grover::run),
        Command::Biqae(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::biqae::run),
        Command::Qaoa(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::qaoa::run),
        Command::Mtda(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::mtda::run),
        Command::Track(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::track::run),
        Command::Zne(a) => single(name, &global, &overlay(a, &section, name)?, out, cmd::zne::run),
        Command::Repro(a) => cmd::repro::run(&global, &overlay(a, &section, name)?, out),
    }
}

pub type Runner<A> = fn(&GlobalArgs, &A, bool) -> Result<ResultTable>;

/// Runs one experiment and renders it with its metadata block.
pub fn execute<A: Serialize + DeserializeOwned>(
    name: &str,
    global: &GlobalArgs,
    args: &A,
    out: &OutputArgs,
    runner: Runner<A>,
) -> Result<(Vec<u8>, ResultTable, String)> {
    let start = Instant::now();
    let table = runner(global, args, out.timing)?;
    let elapsed = start.elapsed().as_secs_f64();
    let (config, hash) = fingerprint(name, global, args);
    let meta = Metadata {
        artifact: "qa-bench".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        experiment: name.into(),
        config_sha256: hash.clone(),
        config,
        wall_clock_s: out.timing.then_some(elapsed),
    };
    Ok((table::render(&table, &meta, out.format)?, table, hash))
}

fn single<A: Serialize + DeserializeOwned>(
    name: &str,
    global: &GlobalArgs,
    args: &A,
    out: &OutputArgs,
    runner: Runner<A>,
) -> Result<()> {
    let (bytes, _, _) = execute(name, global, args, out, runner)?;
    table::emit(&bytes, out.out.as_deref().map(Path::new))
}
