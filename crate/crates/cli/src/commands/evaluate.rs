use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args as ClapArgs;

use hexwrench_core::eval::{evaluate, hysteresis_loop, EvalOptions};
use hexwrench_core::sim::{SimLog, WrenchSeries};
use hexwrench_core::{Capacity, AXIS_NAMES};

use crate::plot::SvgPlot;

#[derive(ClapArgs)]
pub struct Args {
    /// Measured wrench series CSV (t,fx,..,tz).
    #[arg(long)]
    meas: PathBuf,
    /// Reference series: wrench CSV or a full pressure log CSV.
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Linearly resample the measured series onto the reference timestamps
    /// instead of requiring aligned sampling.
    #[arg(long)]
    resample: bool,
    /// Force full scale for drift normalization, N.
    #[arg(long, default_value_t = 50.0)]
    force_capacity: f64,
    /// Torque full scale for drift normalization, N*m.
    #[arg(long, default_value_t = 1.0)]
    torque_capacity: f64,
    /// Directory for per-figure CSV and SVG plot data.
    #[arg(long)]
    plots: Option<PathBuf>,
    /// Output report JSON.
    #[arg(long, short)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let meas = WrenchSeries::read_csv(&args.meas)
        .with_context(|| format!("reading measured series {}", args.meas.display()))?;
    let reference = read_reference(&args.reference)?;

    let meas = align(&meas, &reference, args.resample)?;

    let options = EvalOptions {
        capacity: Capacity {
            force_n: args.force_capacity,
            torque_nm: args.torque_capacity,
        },
        ..EvalOptions::default()
    };
    let report = evaluate(&meas, &reference, &options)?;
    report
        .to_file(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    if let Some(dir) = &args.plots {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))?;
        emit_plot_data(dir, &meas, &reference)?;
    }

    for axis in &report.axes {
        let fmt = |v: Option<f64>| match v {
            Some(x) => format!("{:.2}%", 100.0 * x),
            None => "-".to_string(),
        };
        eprintln!(
            "{}: dev {} rep {} nlin {} hys {} dri {} acc {} slope {}",
            axis.axis,
            fmt(axis.e_dev),
            fmt(axis.e_rep),
            fmt(axis.e_nlin),
            fmt(axis.e_hys),
            match axis.e_dri {
                Some(x) => format!("+-{:.2}%", 100.0 * x),
                None => "-".to_string(),
            },
            fmt(axis.e_acc),
            match &axis.static_fit {
                Some(f) => format!("{:.4} (R2 {:.4})", f.slope, f.r_squared),
                None => "-".to_string(),
            }
        );
    }
    Ok(())
}

/// Reference may be a wrench series or a full pressure log.
fn read_reference(path: &Path) -> Result<WrenchSeries> {
    let header = {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading reference {}", path.display()))?;
        text.lines().next().unwrap_or_default().to_string()
    };
    if header.starts_with("t,fx,fy,fz,tx,ty,tz,p01") {
        Ok(SimLog::read_csv(path)?.wrench_series())
    } else {
        Ok(WrenchSeries::read_csv(path)?)
    }
}

fn align(meas: &WrenchSeries, reference: &WrenchSeries, resample: bool) -> Result<WrenchSeries> {
    let aligned = meas.t.len() == reference.t.len()
        && meas
            .t
            .iter()
            .zip(&reference.t)
            .all(|(a, b)| (a - b).abs() < 1e-9);
    if aligned {
        return Ok(meas.clone());
    }
    if !resample {
        bail!(
            "series are not sample-aligned ({} vs {} samples); pass --resample to interpolate",
            meas.t.len(),
            reference.t.len()
        );
    }
    if meas.t.len() < 2 {
        bail!("cannot resample a series with fewer than two samples");
    }
    let mut out = WrenchSeries::default();
    for &t in &reference.t {
        let idx = match meas.t.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => {
                out.t.push(t);
                out.wrenches.push(meas.wrenches[i]);
                continue;
            }
            Err(i) => i,
        };
        let (i0, i1) = if idx == 0 {
            (0, 1)
        } else if idx >= meas.t.len() {
            (meas.t.len() - 2, meas.t.len() - 1)
        } else {
            (idx - 1, idx)
        };
        let (t0, t1) = (meas.t[i0], meas.t[i1]);
        let a = if t1 == t0 { 0.0 } else { (t - t0) / (t1 - t0) };
        let w = meas.wrenches[i0] * (1.0 - a) + meas.wrenches[i1] * a;
        out.t.push(t);
        out.wrenches.push(w);
    }
    Ok(out)
}

fn emit_plot_data(dir: &Path, meas: &WrenchSeries, reference: &WrenchSeries) -> Result<()> {
    use std::io::Write;

    let unloaded: Vec<usize> = reference
        .wrenches
        .iter()
        .enumerate()
        .filter(|(_, w)| w.to_array().iter().all(|v| *v == 0.0))
        .map(|(i, _)| i)
        .collect();

    let mut drift_plot = SvgPlot::new("Drift over time (no load)", "t [s]", "output");
    let colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

    for axis in 0..6 {
        let name = AXIS_NAMES[axis];
        let m = meas.axis(axis);
        let r = reference.axis(axis);

        // Static response scatter over driven samples.
        let driven: Vec<(f64, f64)> = r
            .iter()
            .zip(&m)
            .filter(|(rv, _)| **rv != 0.0)
            .map(|(rv, mv)| (*rv, *mv))
            .collect();
        if driven.len() >= 3 {
            let path = dir.join(format!("static_response_{}.csv", name.to_lowercase()));
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "ref,meas")?;
            for (rv, mv) in &driven {
                writeln!(f, "{rv},{mv}")?;
            }
            let mut plot = SvgPlot::new(
                &format!("Static response {name}"),
                "reference",
                "measured",
            );
            plot.scatter(&driven, colors[axis]);
            let lo = driven.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let hi = driven.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            plot.polyline(&[(lo, lo), (hi, hi)], "#888888");
            plot.write(&dir.join(format!("static_response_{}.svg", name.to_lowercase())))?;
        }

        // Hysteresis loop data.
        if let Ok(loop_) = hysteresis_loop(&m, &r, 101) {
            let path = dir.join(format!("hysteresis_{}.csv", name.to_lowercase()));
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "ref,loading,unloading")?;
            for ((g, l), u) in loop_
                .grid
                .iter()
                .zip(&loop_.loading)
                .zip(&loop_.unloading)
            {
                writeln!(f, "{g},{l},{u}")?;
            }
            let mut plot = SvgPlot::new(
                &format!("Hysteresis loop {name}"),
                "reference",
                "measured",
            );
            let up: Vec<(f64, f64)> = loop_
                .grid
                .iter()
                .zip(&loop_.loading)
                .map(|(a, b)| (*a, *b))
                .collect();
            let down: Vec<(f64, f64)> = loop_
                .grid
                .iter()
                .zip(&loop_.unloading)
                .map(|(a, b)| (*a, *b))
                .collect();
            plot.polyline(&up, "#d62728");
            plot.polyline(&down, "#1f77b4");
            plot.write(&dir.join(format!("hysteresis_{}.svg", name.to_lowercase())))?;
        }

        // Drift trace over unloaded samples.
        if !unloaded.is_empty() {
            let path = dir.join(format!("drift_{}.csv", name.to_lowercase()));
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "t,meas")?;
            let trace: Vec<(f64, f64)> = unloaded
                .iter()
                .map(|&i| (reference.t[i], m[i]))
                .collect();
            for (t, v) in &trace {
                writeln!(f, "{t},{v}")?;
            }
            drift_plot.polyline(&trace, colors[axis]);
        }
    }
    if !unloaded.is_empty() {
        drift_plot.write(&dir.join("drift.svg"))?;
    }
    Ok(())
}
