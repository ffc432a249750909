//! Sealed-chamber gas state and the linearized pressure law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::geometry::{chamber_volumes, SensorLayout};
use crate::{Vec16, NUM_CHANNELS};

/// Uniform value or one value per channel (lower 1-8 then upper 1-8).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerChannel {
    Uniform(f64),
    Each([f64; 16]),
}

impl PerChannel {
    fn resolve(&self) -> [f64; 16] {
        match self {
            PerChannel::Uniform(v) => [*v; 16],
            PerChannel::Each(a) => *a,
        }
    }
}

/// Gas configuration as found in a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    /// Initial absolute pressure, Pa.
    #[serde(default = "default_pressure")]
    pub initial_pressure_pa: PerChannel,
    /// Initial chamber volume, m^3; derived from the geometry when omitted.
    #[serde(default)]
    pub initial_volume_m3: Option<PerChannel>,
}

fn default_pressure() -> PerChannel {
    PerChannel::Uniform(101_325.0)
}

impl Default for GasConfig {
    fn default() -> Self {
        GasConfig {
            initial_pressure_pa: default_pressure(),
            initial_volume_m3: None,
        }
    }
}

/// Resolved initial state of all 16 chambers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberGasState {
    /// Initial absolute pressure per chamber, Pa.
    pub p0: [f64; 16],
    /// Initial volume per chamber, m^3.
    pub v0: [f64; 16],
}

impl ChamberGasState {
    pub fn from_config(config: &GasConfig, layout: &SensorLayout) -> Result<Self> {
        let p0 = config.initial_pressure_pa.resolve();
        let v0 = match &config.initial_volume_m3 {
            Some(v) => v.resolve(),
            None => {
                let lower = chamber_volumes(layout, &layout.lower);
                let upper = chamber_volumes(layout, &layout.upper);
                std::array::from_fn(|k| if k < 8 { lower[k] } else { upper[k - 8] })
            }
        };
        let state = ChamberGasState { p0, v0 };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..NUM_CHANNELS {
            if !(self.p0[k] > 0.0 && self.p0[k].is_finite()) {
                return Err(Error::InvalidGasState(format!(
                    "initial pressure of chamber {} must be positive, got {}",
                    k + 1,
                    self.p0[k]
                )));
            }
            if !(self.v0[k] > 0.0 && self.v0[k].is_finite()) {
                return Err(Error::InvalidGasState(format!(
                    "initial volume of chamber {} must be positive, got {}",
                    k + 1,
                    self.v0[k]
                )));
            }
        }
        Ok(())
    }

    /// Pressure change per unit volume change, kappa_k = -p0/v0 (always < 0).
    pub fn kappa(&self, k: usize) -> f64 {
        -self.p0[k] / self.v0[k]
    }

    /// All 16 kappa values as a vector.
    pub fn kappa_vector(&self) -> Vec16 {
        Vec16::from_fn(|k, _| self.kappa(k))
    }
}

/// Linearized ideal-gas law: dP_k = -(p0_k / v0_k) * dV_k.
pub fn pressure_from_volume(dv: &Vec16, gas: &ChamberGasState) -> Vec16 {
    Vec16::from_fn(|k, _| gas.kappa(k) * dv[k])
}
