use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args as ClapArgs;

use hexwrench_core::model::SensorModel;
use hexwrench_core::sim::{generate_profile, simulate, NoiseConfig, ProfileSpec};
use hexwrench_core::ModelConfig;

use crate::config::{load_or, Defaults};

#[derive(ClapArgs)]
pub struct Args {
    /// Model parameter file (JSON); reference model when omitted.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Load profile file (JSON); staggered calibration ramps when omitted.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Imperfection configuration (JSON); tuned defaults when omitted,
    /// `"none"` for a clean run.
    #[arg(long)]
    noise: Option<String>,
    /// Output CSV path; a `<out>.meta.json` sidecar is written next to it.
    #[arg(long, short)]
    out: PathBuf,
}

pub fn run(args: Args, defaults: &Defaults, seed: Option<u64>) -> Result<()> {
    let model_config = match &args.model {
        Some(p) => ModelConfig::from_file(p)
            .with_context(|| format!("loading model {}", p.display()))?,
        None => defaults.model.clone().unwrap_or_default(),
    };
    let model = SensorModel::from_config(&model_config)?;

    let profile_spec: ProfileSpec = match &args.profile {
        Some(p) => load_or(Some(p), ProfileSpec::default)?,
        None => defaults.profile.clone().unwrap_or_default(),
    };

    let mut noise: NoiseConfig = match args.noise.as_deref() {
        Some("none") => NoiseConfig::none(),
        Some(path) => load_or(Some(std::path::Path::new(path)), NoiseConfig::default)?,
        None => defaults.noise.clone().unwrap_or_default(),
    };
    if let Some(seed) = seed {
        noise.seed = seed;
    }

    let profile = generate_profile(&profile_spec)?;
    let log = simulate(&profile, &model, &model_config, &noise)?;
    log.write_csv(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let meta = log.meta.as_ref().expect("simulated log carries metadata");
    let meta_path = sidecar_path(&args.out);
    meta.to_file(&meta_path)
        .with_context(|| format!("writing {}", meta_path.display()))?;

    eprintln!(
        "wrote {} rows to {} (+ {})",
        log.rows.len(),
        args.out.display(),
        meta_path.display()
    );
    Ok(())
}

fn sidecar_path(csv: &std::path::Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
