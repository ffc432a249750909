//! Measurement imperfections: first-order lag, play-operator hysteresis,
//! additive noise, random-walk drift and quantization.
//!
//! `simulate` applies them in that fixed order. Each operator is also
//! exposed on its own for tests and for system-identification round trips.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NOISE_SCHEMA_VERSION: u32 = 1;

/// Per-axis first-order response applied to the driving wrench, mimicking
/// the pneumatic lag of the prototype channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    /// Time constants in canonical axis order, s.
    pub tau_s: [f64; 6],
    /// DC gains in canonical axis order.
    pub gain: [f64; 6],
}

impl DynamicsConfig {
    /// Time constants and gains identified on the prototype hardware.
    pub fn prototype() -> Self {
        DynamicsConfig {
            tau_s: [0.0036, 0.0038, 0.0018, 0.0033, 0.0026, 0.0049],
            gain: [0.9879, 0.9761, 0.9815, 1.007, 0.9899, 0.9488],
        }
    }
}

/// Imperfection configuration. All magnitudes in Pa on the channel signals;
/// everything is deterministic given `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub schema_version: u32,
    /// Std of white Gaussian noise added per channel sample, Pa.
    pub gaussian_std_pa: f64,
    /// Std of the per-sample random-walk drift increment, Pa.
    pub drift_rw_std_pa: f64,
    /// Quantization step, Pa; 0 disables. Default 3.9 Pa = 0.039 mbar,
    /// the barometer resolution.
    pub quant_step_pa: f64,
    /// Half-width of the play (backlash) operator, Pa; 0 disables.
    pub hysteresis_play_pa: f64,
    pub seed: u64,
    /// Optional per-axis lag on the driving wrench.
    #[serde(default)]
    pub dynamics: Option<DynamicsConfig>,
}

impl Default for NoiseConfig {
    /// Tuned so the evaluation pipeline reports error levels of the same
    /// character as the physical prototype (forces a few percent, twist
    /// axis noticeably worse).
    fn default() -> Self {
        NoiseConfig {
            schema_version: NOISE_SCHEMA_VERSION,
            gaussian_std_pa: 300.0,
            drift_rw_std_pa: 25.0,
            quant_step_pa: 3.9,
            hysteresis_play_pa: 1500.0,
            seed: 0,
            dynamics: Some(DynamicsConfig::prototype()),
        }
    }
}

impl NoiseConfig {
    /// Every imperfection disabled; the log reproduces the forward model.
    pub fn none() -> Self {
        NoiseConfig {
            schema_version: NOISE_SCHEMA_VERSION,
            gaussian_std_pa: 0.0,
            drift_rw_std_pa: 0.0,
            quant_step_pa: 0.0,
            hysteresis_play_pa: 0.0,
            seed: 0,
            dynamics: None,
        }
    }

    pub fn check_schema(&self) -> Result<()> {
        if self.schema_version != NOISE_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported noise schema version {} (expected {})",
                self.schema_version, NOISE_SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_schema()?;
        for (name, v) in [
            ("gaussian_std_pa", self.gaussian_std_pa),
            ("drift_rw_std_pa", self.drift_rw_std_pa),
            ("quant_step_pa", self.quant_step_pa),
            ("hysteresis_play_pa", self.hysteresis_play_pa),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Schema(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// Classical play (backlash) operator with half-width `play`:
/// `y_t = clamp(y_{t-1}, x_t - play, x_t + play)`, seeded at the first input.
#[derive(Debug, Clone)]
pub struct PlayOperator {
    play: f64,
    state: Option<f64>,
}

impl PlayOperator {
    pub fn new(play: f64) -> Self {
        PlayOperator { play, state: None }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = match self.state {
            None => x,
            Some(prev) => prev.clamp(x - self.play, x + self.play),
        };
        self.state = Some(y);
        y
    }
}

/// Applies the play operator over a series. `play = 0` is the identity.
pub fn apply_hysteresis(series: &[f64], play: f64) -> Vec<f64> {
    let mut op = PlayOperator::new(play);
    series.iter().map(|&x| op.step(x)).collect()
}

/// Discrete first-order lag `y_t = y_{t-1} + dt/(tau+dt) * (x_t - y_{t-1})`,
/// seeded at the first input. `tau = 0` is the identity.
#[derive(Debug, Clone)]
pub struct FirstOrderLag {
    /// Smoothing coefficient dt / (tau + dt).
    coeff: f64,
    state: Option<f64>,
}

impl FirstOrderLag {
    pub fn new(tau: f64, dt: f64) -> Self {
        FirstOrderLag {
            coeff: dt / (tau + dt),
            state: None,
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = match self.state {
            // coeff 1 (tau = 0) must be an exact passthrough, not x plus
            // rounding from prev + (x - prev).
            None => x,
            Some(_) if self.coeff == 1.0 => x,
            Some(prev) => prev + self.coeff * (x - prev),
        };
        self.state = Some(y);
        y
    }
}

/// Applies the first-order lag over a uniformly sampled series.
pub fn apply_dynamics(series: &[f64], tau: f64, dt: f64) -> Vec<f64> {
    assert!(dt > 0.0, "sample step must be positive");
    assert!(tau >= 0.0, "time constant must be non-negative");
    let mut lag = FirstOrderLag::new(tau, dt);
    series.iter().map(|&x| lag.step(x)).collect()
}

/// Rounds `x` to the nearest multiple of `step` anchored at `anchor`
/// (the sensor's zero), so outputs are anchor + n*step. `step = 0` is the
/// identity.
pub fn quantize(x: f64, step: f64, anchor: f64) -> f64 {
    if step == 0.0 {
        x
    } else {
        anchor + ((x - anchor) / step).round() * step
    }
}
