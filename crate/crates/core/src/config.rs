//! Model parameter file: versioned JSON tying geometry, materials, gas
//! state and rated capacity together.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{GasConfig, GeometryConfig, MaterialConfig};
use crate::wrench::Capacity;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema_version: u32,
    pub geometry: GeometryConfig,
    pub materials: MaterialConfig,
    #[serde(default)]
    pub gas: GasConfig,
    #[serde(default)]
    pub capacity: Capacity,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let geometry = GeometryConfig::default();
        let materials = MaterialConfig::reference(geometry.pillar_radius_m);
        ModelConfig {
            schema_version: MODEL_SCHEMA_VERSION,
            geometry,
            materials,
            gas: GasConfig::default(),
            capacity: Capacity::default(),
        }
    }
}

impl ModelConfig {
    pub fn check_schema(&self) -> Result<()> {
        if self.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported model schema version {} (expected {})",
                self.schema_version, MODEL_SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ModelConfig = serde_json::from_str(&text)?;
        config.check_schema()?;
        Ok(config)
    }

    pub fn to_file(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Content hash of the canonical JSON form, for log provenance.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("model config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
