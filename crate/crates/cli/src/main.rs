//! `hexwrench`: simulate, calibrate, decouple, evaluate and identify the
//! air-chamber six-axis force/torque sensor pipeline.

mod commands;
mod config;
mod plot;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hexwrench",
    version,
    about = "Air-chamber six-axis force/torque sensing pipeline",
    propagate_version = true
)]
struct Cli {
    /// Default configuration file (model/profile/noise sections).
    #[arg(long, global = true, env = "HEXWRENCH_CONFIG")]
    config: Option<PathBuf>,

    /// Override the simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a load profile, push it through the sensor model and write
    /// a pressure log CSV plus a metadata sidecar.
    Simulate(commands::simulate::Args),
    /// Recover a decoupling matrix from a pressure log.
    Calibrate(commands::calibrate::Args),
    /// Convert a pressure log to a wrench series with a calibration file.
    Decouple(commands::decouple::Args),
    /// Compare a measured wrench series against its reference and write a
    /// metric report plus plot data.
    Evaluate(commands::evaluate::Args),
    /// Identify per-axis first-order transfer functions and emit Bode data.
    Sysid(commands::sysid::Args),
}

fn main() {
    let cli = Cli::parse();
    let defaults = match config::Defaults::load(cli.config.as_deref()) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(args, &defaults, cli.seed),
        Command::Calibrate(args) => commands::calibrate::run(args, &defaults),
        Command::Decouple(args) => commands::decouple::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Sysid(args) => commands::sysid::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
