use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args as ClapArgs;

use hexwrench_core::calib::CalibrationFile;
use hexwrench_core::decouple::Decoupler;
use hexwrench_core::sim::SimLog;

#[derive(ClapArgs)]
pub struct Args {
    /// Pressure log CSV.
    #[arg(long)]
    log: PathBuf,
    /// Calibration JSON produced by `hexwrench calibrate`.
    #[arg(long)]
    cal: PathBuf,
    /// No-load baseline window at the start of the log, s.
    #[arg(long, default_value_t = 0.5)]
    tare_window: f64,
    /// Optional trailing moving-average window, samples.
    #[arg(long)]
    smooth: Option<usize>,
    /// Output wrench CSV (t,fx,fy,fz,tx,ty,tz).
    #[arg(long, short)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let log = SimLog::read_csv(&args.log)
        .with_context(|| format!("reading log {}", args.log.display()))?;
    let calibration = CalibrationFile::from_file(&args.cal)
        .with_context(|| format!("reading calibration {}", args.cal.display()))?
        .into_result()?;

    let mut decoupler = Decoupler::new(&calibration);
    if let Some(w) = args.smooth {
        decoupler = decoupler.with_smoothing(w);
    }
    let outcome = decoupler.tare_and_stream(&log, args.tare_window)?;
    outcome
        .series
        .write_csv(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    if outcome.rejected_rows.is_empty() {
        eprintln!(
            "decoupled {} rows to {}",
            outcome.series.wrenches.len(),
            args.out.display()
        );
    } else {
        eprintln!(
            "decoupled {} rows to {} ({} rows rejected: non-finite channels at {:?})",
            outcome.series.wrenches.len(),
            args.out.display(),
            outcome.rejected_rows.len(),
            &outcome.rejected_rows[..outcome.rejected_rows.len().min(8)]
        );
    }
    Ok(())
}
