//! Time-series generation: load profiles, the forward simulation and its
//! imperfection chain, and the log/CSV formats.

pub mod imperfection;
pub mod log;
pub mod profile;
pub mod simulate;

pub use imperfection::{
    apply_dynamics, apply_hysteresis, quantize, DynamicsConfig, FirstOrderLag, NoiseConfig,
    PlayOperator,
};
pub use log::{SimLog, SimMeta, SimRow, WrenchSeries, LOG_SCHEMA_VERSION};
pub use profile::{
    generate_profile, LoadProfile, ProfileSpec, WaveformSpec, HF_HZ, LF_HZ, MF_HZ,
    PROFILE_SCHEMA_VERSION,
};
pub use simulate::simulate;
