//! Shared fixtures for the pipeline benchmarks.

use hexwrench_core::calib::{fit_structured, CalibrationData, CalibrationOptions};
use hexwrench_core::decouple::Decoupler;
use hexwrench_core::model::SensorModel;
use hexwrench_core::sim::{generate_profile, simulate, NoiseConfig, ProfileSpec, SimLog};
use hexwrench_core::ModelConfig;

/// Reference model plus its config.
pub fn model() -> (ModelConfig, SensorModel) {
    let config = ModelConfig::default();
    let model = SensorModel::from_config(&config).expect("reference model");
    (config, model)
}

/// Clean 10 s calibration log at 1024 Hz.
pub fn clean_log() -> (ModelConfig, SensorModel, SimLog) {
    let (config, model) = model();
    let profile = generate_profile(&ProfileSpec::default()).unwrap();
    let log = simulate(&profile, &model, &config, &NoiseConfig::none()).unwrap();
    (config, model, log)
}

/// Decoupler tared and loaded with a structured calibration.
pub fn ready_decoupler() -> (SimLog, Decoupler) {
    let (_, model, log) = clean_log();
    let options = CalibrationOptions::default();
    let data = CalibrationData::from_log(&log, &options).unwrap();
    let cal = fit_structured(&data, &model.layout, &options).unwrap();
    let mut decoupler = Decoupler::new(&cal);
    decoupler.set_baseline(model.gas.p0);
    (log, decoupler)
}
