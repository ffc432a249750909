//! Combined defaults file pointed to by `--config` / `HEXWRENCH_CONFIG`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use hexwrench_core::sim::{NoiseConfig, ProfileSpec};
use hexwrench_core::ModelConfig;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Optional inline defaults for the pipeline commands. Any section may be
/// omitted; command-line file arguments override these.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
}

/// Resolved defaults for the session.
#[derive(Debug, Clone, Default)]
pub struct Defaults {
    pub model: Option<ModelConfig>,
    pub profile: Option<ProfileSpec>,
    pub noise: Option<NoiseConfig>,
}

impl Defaults {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Defaults::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if file.schema_version != CONFIG_SCHEMA_VERSION {
            bail!(
                "unsupported config schema version {} (expected {CONFIG_SCHEMA_VERSION})",
                file.schema_version
            );
        }
        Ok(Defaults {
            model: file.model,
            profile: file.profile,
            noise: file.noise,
        })
    }
}

/// Loads a JSON file of type `T` or falls back to the given default.
pub fn load_or<T, F>(path: Option<&Path>, fallback: F) -> Result<T>
where
    T: serde::de::DeserializeOwned,
    F: FnOnce() -> T,
{
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => Ok(fallback()),
    }
}
