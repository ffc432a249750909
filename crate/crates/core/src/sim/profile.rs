//! Load profiles: per-axis waveform specs sampled into a wrench time series.
//!
//! Waveforms are generated from integer sample indices so that a repeated
//! spec is bit-identical and triangular ramps hit their peak exactly when a
//! sample lands on the apex.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wrench::{Capacity, Wrench, AXIS_NAMES};

pub const PROFILE_SCHEMA_VERSION: u32 = 1;

/// Upload-download loading speeds used for hysteresis characterisation.
pub const LF_HZ: f64 = 0.2;
pub const MF_HZ: f64 = 1.0;
pub const HF_HZ: f64 = 5.0;

/// One axis' waveform over the active window of the profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveformSpec {
    Zero,
    Constant {
        value: f64,
    },
    /// Symmetric piecewise-linear upload-download cycles, 0 -> peak -> 0.
    RampCycles {
        peak: f64,
        cycles: u32,
        /// Active sub-window in seconds relative to the end of the lead-in;
        /// the whole active region when omitted.
        #[serde(default)]
        window_s: Option<(f64, f64)>,
    },
    Sine {
        freq_hz: f64,
        amplitude: f64,
        #[serde(default)]
        window_s: Option<(f64, f64)>,
    },
    /// Seeded Gaussian random walk, clamped to the axis capacity.
    RandomWalk {
        step_std: f64,
        #[serde(default)]
        window_s: Option<(f64, f64)>,
    },
}

impl WaveformSpec {
    fn peak_value(&self) -> f64 {
        match self {
            WaveformSpec::Zero => 0.0,
            WaveformSpec::Constant { value } => value.abs(),
            WaveformSpec::RampCycles { peak, .. } => peak.abs(),
            WaveformSpec::Sine { amplitude, .. } => amplitude.abs(),
            // Clamped to capacity during generation.
            WaveformSpec::RandomWalk { .. } => 0.0,
        }
    }
}

/// Profile specification: sampling grid, lead-in and per-axis waveforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub schema_version: u32,
    /// Samples per second.
    pub sample_rate_hz: f64,
    /// Total duration including the lead-in, s.
    pub duration_s: f64,
    /// Quiet no-load window at the start, used for taring, s.
    pub lead_in_s: f64,
    /// Seed for stochastic waveforms.
    pub seed: u64,
    /// Waveforms in canonical axis order (Fx, Fy, Fz, Tx, Ty, Tz).
    pub axes: [WaveformSpec; 6],
    /// Rated range the waveforms must respect.
    #[serde(default)]
    pub capacity: Capacity,
}

impl Default for ProfileSpec {
    /// Sequential single-axis upload-download calibration profile: 10 s at
    /// 1024 Hz, 0.5 s quiet lead-in, then each axis in turn runs two ramp
    /// cycles to its rated capacity.
    fn default() -> Self {
        ProfileSpec::staggered_ramps(1024.0, 10.0, 0.5, 2, Capacity::default())
    }
}

impl ProfileSpec {
    /// Each axis in its own time slice, `cycles` upload-download ramps to
    /// the rated capacity. Excites all six axes independently.
    pub fn staggered_ramps(
        sample_rate_hz: f64,
        duration_s: f64,
        lead_in_s: f64,
        cycles: u32,
        capacity: Capacity,
    ) -> Self {
        let active = duration_s - lead_in_s;
        let slice = active / 6.0;
        let axes = std::array::from_fn(|i| WaveformSpec::RampCycles {
            peak: capacity.axis_limit(i),
            cycles,
            window_s: Some((i as f64 * slice, (i + 1) as f64 * slice)),
        });
        ProfileSpec {
            schema_version: PROFILE_SCHEMA_VERSION,
            sample_rate_hz,
            duration_s,
            lead_in_s,
            seed: 0,
            axes,
            capacity,
        }
    }

    /// Single-axis upload-download cycling at `freq_hz` (for hysteresis
    /// sweeps at LF/MF/HF), all other axes quiet.
    pub fn single_axis_ramps(
        axis: usize,
        peak: f64,
        freq_hz: f64,
        duration_s: f64,
        lead_in_s: f64,
        sample_rate_hz: f64,
        capacity: Capacity,
    ) -> Self {
        let active = duration_s - lead_in_s;
        let cycles = (active * freq_hz).floor().max(1.0) as u32;
        let mut axes = std::array::from_fn(|_| WaveformSpec::Zero);
        axes[axis] = WaveformSpec::RampCycles {
            peak,
            cycles,
            window_s: None,
        };
        ProfileSpec {
            schema_version: PROFILE_SCHEMA_VERSION,
            sample_rate_hz,
            duration_s,
            lead_in_s,
            seed: 0,
            axes,
            capacity,
        }
    }

    pub fn check_schema(&self) -> Result<()> {
        if self.schema_version != PROFILE_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported profile schema version {} (expected {})",
                self.schema_version, PROFILE_SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.check_schema()?;
        let rate_ok = self.sample_rate_hz > 0.0;
        if !rate_ok {
            return Err(Error::Schema("sample rate must be positive".into()));
        }
        let duration_ok = self.duration_s > 0.0;
        if !duration_ok || self.lead_in_s < 0.0 || self.lead_in_s >= self.duration_s {
            return Err(Error::Schema(
                "need 0 <= lead-in < duration and duration > 0".into(),
            ));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            let limit = self.capacity.axis_limit(i);
            let peak = axis.peak_value();
            if peak > limit {
                return Err(Error::CapacityExceeded {
                    axis: AXIS_NAMES[i],
                    value: peak,
                    limit,
                });
            }
        }
        Ok(())
    }
}

/// Sampled load profile: the spec plus its deterministic sample series.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile {
    pub spec: ProfileSpec,
    /// Sample times, s; fixed step 1/sample_rate.
    pub t: Vec<f64>,
    pub wrenches: Vec<Wrench>,
}

/// Samples a profile spec. Deterministic given the spec (including seed).
pub fn generate_profile(spec: &ProfileSpec) -> Result<LoadProfile> {
    spec.validate()?;
    let rate = spec.sample_rate_hz;
    let n = (spec.duration_s * rate).round() as usize;
    let lead = (spec.lead_in_s * rate).round() as usize;
    let active_n = n.saturating_sub(lead);

    let mut per_axis: Vec<Vec<f64>> = Vec::with_capacity(6);
    for (i, wf) in spec.axes.iter().enumerate() {
        per_axis.push(sample_axis(wf, i, spec, active_n)?);
    }

    let t: Vec<f64> = (0..n).map(|k| k as f64 / rate).collect();
    let wrenches: Vec<Wrench> = (0..n)
        .map(|k| {
            if k < lead {
                Wrench::ZERO
            } else {
                let j = k - lead;
                Wrench::from_array(std::array::from_fn(|i| per_axis[i][j]))
            }
        })
        .collect();

    Ok(LoadProfile {
        spec: spec.clone(),
        t,
        wrenches,
    })
}

/// Samples one axis over the active region (indices relative to lead-in end).
fn sample_axis(
    wf: &WaveformSpec,
    axis_index: usize,
    spec: &ProfileSpec,
    active_n: usize,
) -> Result<Vec<f64>> {
    let rate = spec.sample_rate_hz;
    let window = |window_s: &Option<(f64, f64)>| -> (usize, usize) {
        match window_s {
            None => (0, active_n),
            Some((a, b)) => {
                let lo = (a * rate).round().max(0.0) as usize;
                let hi = ((b * rate).round() as usize).min(active_n);
                (lo.min(hi), hi)
            }
        }
    };

    let mut out = vec![0.0; active_n];
    match wf {
        WaveformSpec::Zero => {}
        WaveformSpec::Constant { value } => {
            for v in out.iter_mut() {
                *v = *value;
            }
        }
        WaveformSpec::RampCycles {
            peak,
            cycles,
            window_s,
        } => {
            let (lo, hi) = window(window_s);
            let len = hi - lo;
            if *cycles == 0 || len == 0 {
                return Ok(out);
            }
            let cycle_len = len / *cycles as usize;
            if cycle_len < 2 {
                return Err(Error::Schema(format!(
                    "ramp window too short for {cycles} cycles on axis {}",
                    AXIS_NAMES[axis_index]
                )));
            }
            let half = cycle_len / 2;
            let active = cycle_len * *cycles as usize;
            for (j, slot) in out[lo..lo + active].iter_mut().enumerate() {
                let pos = j % cycle_len;
                let frac = if pos <= half {
                    pos as f64 / half as f64
                } else {
                    (cycle_len - pos) as f64 / (cycle_len - half) as f64
                };
                *slot = peak * frac;
            }
        }
        WaveformSpec::Sine {
            freq_hz,
            amplitude,
            window_s,
        } => {
            let (lo, hi) = window(window_s);
            for (j, slot) in out[lo..hi].iter_mut().enumerate() {
                let t = j as f64 / rate;
                *slot = amplitude * (std::f64::consts::TAU * freq_hz * t).sin();
            }
        }
        WaveformSpec::RandomWalk { step_std, window_s } => {
            let (lo, hi) = window(window_s);
            let limit = spec.capacity.axis_limit(axis_index);
            let mut rng = ChaCha8Rng::seed_from_u64(
                spec.seed
                    .wrapping_add(axis_index as u64)
                    .wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let normal = Normal::new(0.0, *step_std)
                .map_err(|e| Error::Schema(format!("bad random walk std: {e}")))?;
            let mut level = 0.0;
            for slot in out[lo..hi].iter_mut() {
                level += normal.sample(&mut rng);
                level = level.clamp(-limit, limit);
                *slot = level;
            }
        }
    }
    Ok(out)
}
