use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args as ClapArgs;

use hexwrench_core::calib::{
    fit_block, fit_dense, fit_structured, CalibrationData, CalibrationFile, CalibrationOptions,
    Strategy,
};
use hexwrench_core::model::build_layout;
use hexwrench_core::sim::SimLog;
use hexwrench_core::ModelConfig;

use crate::config::Defaults;

#[derive(ClapArgs)]
pub struct Args {
    /// Pressure log CSV with reference wrenches.
    #[arg(long)]
    log: PathBuf,
    /// dense (96 parameters), block (72) or structured (6).
    #[arg(long)]
    strategy: String,
    /// Model file providing the chamber layout (structured strategy).
    #[arg(long)]
    model: Option<PathBuf>,
    /// No-load baseline window at the start of the log, s.
    #[arg(long, default_value_t = 0.5)]
    tare_window: f64,
    /// Optional ridge regularization for noisy data.
    #[arg(long)]
    ridge: Option<f64>,
    /// Output calibration JSON.
    #[arg(long, short)]
    out: PathBuf,
}

pub fn run(args: Args, defaults: &Defaults) -> Result<()> {
    let strategy: Strategy = args.strategy.parse()?;
    let log = SimLog::read_csv(&args.log)
        .with_context(|| format!("reading log {}", args.log.display()))?;

    let options = CalibrationOptions {
        tare_window_s: args.tare_window,
        ridge: args.ridge,
        ..CalibrationOptions::default()
    };
    let data = CalibrationData::from_log(&log, &options)?;

    let result = match strategy {
        Strategy::Dense => fit_dense(&data, &options)?,
        Strategy::Block => fit_block(&data, &options)?,
        Strategy::Structured => {
            let model_config = match &args.model {
                Some(p) => ModelConfig::from_file(p)
                    .with_context(|| format!("loading model {}", p.display()))?,
                None => match &defaults.model {
                    Some(m) => m.clone(),
                    None => {
                        eprintln!("no --model given; assuming the reference chamber layout");
                        ModelConfig::default()
                    }
                },
            };
            let layout = build_layout(&model_config.geometry)?;
            fit_structured(&data, &layout, &options)?
        }
    };

    CalibrationFile::from_result(&result)
        .to_file(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let d = &result.diagnostics;
    eprintln!(
        "{:?} fit: {} parameters, condition {:.3e}{}, residual RMS {:?}",
        result.strategy,
        d.parameter_count,
        d.condition_number,
        if d.ill_conditioned { " (ill-conditioned)" } else { "" },
        d.residual_rms
    );
    Ok(())
}
