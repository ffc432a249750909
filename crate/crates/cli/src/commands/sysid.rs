use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};

use hexwrench_core::sim::WrenchSeries;
use hexwrench_core::sysid::{
    bode_points, fit_first_order, log_frequency_grid, FirstOrderFit, TRANSFER_SCHEMA_VERSION,
};
use hexwrench_core::AXIS_NAMES;

#[derive(ClapArgs)]
pub struct Args {
    /// Reference (input) wrench series CSV.
    #[arg(long)]
    input: PathBuf,
    /// Measured (output) wrench series CSV.
    #[arg(long)]
    output: PathBuf,
    /// Output transfer-function JSON.
    #[arg(long, short)]
    out: PathBuf,
    /// Optional Bode data CSV (axis,freq_hz,magnitude_db,phase_deg).
    #[arg(long)]
    bode: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    freq_min: f64,
    #[arg(long, default_value_t = 100.0)]
    freq_max: f64,
    #[arg(long, default_value_t = 61)]
    points: usize,
}

#[derive(Serialize, Deserialize)]
struct AxisFit {
    axis: String,
    gain: f64,
    tau_s: f64,
    fit_rms: f64,
}

#[derive(Serialize, Deserialize)]
struct TransferFile {
    schema_version: u32,
    axes: Vec<AxisFit>,
}

pub fn run(args: Args) -> Result<()> {
    let input = WrenchSeries::read_csv(&args.input)
        .with_context(|| format!("reading input {}", args.input.display()))?;
    let output = WrenchSeries::read_csv(&args.output)
        .with_context(|| format!("reading output {}", args.output.display()))?;
    if input.t.len() < 2 {
        anyhow::bail!("input series too short to infer the sample step");
    }
    let dt = input.t[1] - input.t[0];

    let mut fits: Vec<(usize, FirstOrderFit)> = Vec::new();
    for (axis, name) in AXIS_NAMES.iter().enumerate() {
        let x = input.axis(axis);
        let y = output.axis(axis);
        match fit_first_order(&x, &y, dt) {
            Ok(fit) => fits.push((axis, fit)),
            Err(hexwrench_core::Error::ConstantInput) => {
                eprintln!("{name}: skipped (constant input)");
            }
            Err(e) => return Err(e.into()),
        }
    }

    let file = TransferFile {
        schema_version: TRANSFER_SCHEMA_VERSION,
        axes: fits
            .iter()
            .map(|(axis, fit)| AxisFit {
                axis: AXIS_NAMES[*axis].to_string(),
                gain: fit.gain,
                tau_s: fit.tau_s,
                fit_rms: fit.fit_rms,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    std::fs::write(&args.out, text)
        .with_context(|| format!("writing {}", args.out.display()))?;

    if let Some(bode_path) = &args.bode {
        use std::io::Write;
        let freqs = log_frequency_grid(args.freq_min, args.freq_max, args.points);
        let mut f = std::fs::File::create(bode_path)
            .with_context(|| format!("writing {}", bode_path.display()))?;
        writeln!(f, "axis,freq_hz,magnitude_db,phase_deg")?;
        for (axis, fit) in &fits {
            for p in bode_points(fit.gain, fit.tau_s, &freqs) {
                writeln!(
                    f,
                    "{},{},{},{}",
                    AXIS_NAMES[*axis], p.freq_hz, p.magnitude_db, p.phase_deg
                )?;
            }
        }
    }

    for (axis, fit) in &fits {
        eprintln!(
            "{}: gain {:.4}, tau {:.4} ms, residual RMS {:.3e}",
            AXIS_NAMES[*axis],
            fit.gain,
            1e3 * fit.tau_s,
            fit.fit_rms
        );
    }
    Ok(())
}
