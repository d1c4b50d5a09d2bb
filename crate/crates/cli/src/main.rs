use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod audit;
mod config;
mod doubleslit;
mod evolve;
mod info;
mod output;
mod trajectories;

use config::Config;
use output::Output;

/// Photon wave functions, boosts and Bohmian trajectories from the Weber
/// vector. All output is deterministic for a given config and seed.
#[derive(Debug, Parser)]
#[command(name = "photonwf", version)]
struct Cli {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory receiving all output files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for sampling trajectory start points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Overrides the four-vector audit tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a state exactly and write field snapshots with conservation
    /// diagnostics.
    Evolve,
    /// Compare boosted flows with four-vector transformed flows.
    BoostAudit,
    /// Integrate a Bohmian ensemble and check frame consistency.
    Trajectories,
    /// Photon density frames of a two-source interference pattern.
    Doubleslit,
    /// Print the resolved configuration and grid quantities.
    Info,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Info => info::run(&config),
        command => {
            let out = Output::new(&cli.out)?;
            match command {
                Command::Evolve => evolve::run(&config, &out),
                Command::BoostAudit => {
                    let tolerance = cli.tolerance.unwrap_or(config.audit.tolerance);
                    audit::run(&config, tolerance, &out)
                }
                Command::Trajectories => trajectories::run(&config, cli.seed, &out),
                Command::Doubleslit => doubleslit::run(&config, &out),
                Command::Info => unreachable!(),
            }
        }
    }
}
