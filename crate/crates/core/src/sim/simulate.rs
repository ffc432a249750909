//! Pushes a load profile through the forward model and the imperfection
//! chain, producing a paired (reference wrench, pressures) log.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::model::SensorModel;
use crate::sim::imperfection::{quantize, FirstOrderLag, NoiseConfig, PlayOperator};
use crate::sim::log::{SimLog, SimMeta, SimRow, LOG_SCHEMA_VERSION};
use crate::sim::profile::LoadProfile;
use crate::wrench::Wrench;
use crate::{ModelConfig, NUM_CHANNELS};

/// Simulates the sensor response along `profile`.
///
/// Imperfections apply in a fixed order: per-axis first-order lag on the
/// driving wrench, then per-channel play hysteresis, Gaussian noise,
/// random-walk drift and quantization on the absolute pressures. The logged
/// wrench stays the undistorted reference. Deterministic given the seed.
pub fn simulate(
    profile: &LoadProfile,
    model: &SensorModel,
    model_config: &ModelConfig,
    noise: &NoiseConfig,
) -> Result<SimLog> {
    noise.validate()?;
    let dt = 1.0 / profile.spec.sample_rate_hz;

    let mut axis_lags: Option<(Vec<FirstOrderLag>, [f64; 6])> =
        noise.dynamics.as_ref().map(|d| {
            let lags = d.tau_s.iter().map(|&tau| FirstOrderLag::new(tau, dt)).collect();
            (lags, d.gain)
        });

    let mut plays: Vec<PlayOperator> = (0..NUM_CHANNELS)
        .map(|_| PlayOperator::new(noise.hysteresis_play_pa))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let gaussian = Normal::new(0.0, 1.0).expect("unit normal");
    let mut drift = [0.0_f64; NUM_CHANNELS];

    let mut rows = Vec::with_capacity(profile.wrenches.len());
    for (&t, &w_ref) in profile.t.iter().zip(&profile.wrenches) {
        model.capacity.check(w_ref)?;

        let drive = match &mut axis_lags {
            None => w_ref,
            Some((lags, gain)) => {
                let c = w_ref.to_array();
                Wrench::from_array(std::array::from_fn(|i| gain[i] * lags[i].step(c[i])))
            }
        };

        let mut p = model.absolute_pressures(drive);
        for (k, v) in p.iter_mut().enumerate() {
            *v = plays[k].step(*v);
            if noise.gaussian_std_pa > 0.0 {
                *v += noise.gaussian_std_pa * gaussian.sample(&mut rng);
            }
            if noise.drift_rw_std_pa > 0.0 {
                drift[k] += noise.drift_rw_std_pa * gaussian.sample(&mut rng);
                *v += drift[k];
            }
            *v = quantize(*v, noise.quant_step_pa, model.gas.p0[k]);
        }

        rows.push(SimRow {
            t,
            wrench: w_ref,
            pressures: p,
        });
    }

    Ok(SimLog {
        meta: Some(SimMeta {
            schema_version: LOG_SCHEMA_VERSION,
            sample_rate_hz: profile.spec.sample_rate_hz,
            seed: noise.seed,
            model_hash: model_config.hash(),
            profile: profile.spec.clone(),
            noise: noise.clone(),
        }),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::profile::{generate_profile, ProfileSpec};

    fn setup() -> (LoadProfile, SensorModel, ModelConfig) {
        let spec = ProfileSpec::default();
        let profile = generate_profile(&spec).unwrap();
        let config = ModelConfig::default();
        let model = SensorModel::from_config(&config).unwrap();
        (profile, model, config)
    }

    #[test]
    fn clean_simulation_matches_forward_model() {
        let (profile, model, config) = setup();
        let log = simulate(&profile, &model, &config, &NoiseConfig::none()).unwrap();
        for row in log.rows.iter().step_by(97) {
            let expected = model.absolute_pressures(row.wrench);
            assert_eq!(row.pressures, expected);
        }
    }

    #[test]
    fn quantized_outputs_sit_on_the_anchored_grid() {
        let (profile, model, config) = setup();
        let mut noise = NoiseConfig::none();
        noise.quant_step_pa = 3.9;
        let log = simulate(&profile, &model, &config, &noise).unwrap();
        for row in log.rows.iter().step_by(131) {
            for (k, p) in row.pressures.iter().enumerate() {
                let steps = (p - model.gas.p0[k]) / 3.9;
                assert!(
                    (steps - steps.round()).abs() < 1e-6,
                    "pressure {p} not on the 3.9 Pa grid"
                );
            }
        }
    }

    #[test]
    fn same_seed_gives_bit_identical_logs() {
        let (profile, model, config) = setup();
        let noise = NoiseConfig::default();
        let a = simulate(&profile, &model, &config, &noise).unwrap();
        let b = simulate(&profile, &model, &config, &noise).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn different_seeds_differ() {
        let (profile, model, config) = setup();
        let mut noise = NoiseConfig::default();
        let a = simulate(&profile, &model, &config, &noise).unwrap();
        noise.seed = 1;
        let b = simulate(&profile, &model, &config, &noise).unwrap();
        assert_ne!(a.rows, b.rows);
    }
}
