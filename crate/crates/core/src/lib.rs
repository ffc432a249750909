//! Soft air-chamber six-axis force/torque sensing toolkit.
//!
//! The sensor this crate models is a two-layer stack of 16 sealed air
//! chambers read by absolute barometers: a rigid-backed lower layer whose
//! eight chambers respond only to `Fz`, `Tx`, `Ty`, and a soft upper layer
//! whose eight chambers respond to all six axes. Because every single-axis
//! load produces a volume change linear in the load, the whole chain
//! wrench -> chamber volume -> chamber pressure is linear, and a 6x16
//! decoupling matrix recovers the applied wrench from the 16 pressures.
//!
//! Modules follow the pipeline:
//!
//! * [`model`] — parametric forward physics (geometry, materials, gas law).
//! * [`sim`] — load profiles and time-series simulation with configurable
//!   imperfections (lag, hysteresis, noise, drift, quantization).
//! * [`calib`] — least-squares recovery of the decoupling matrix in dense
//!   (96 parameter), block (72) and structured (6) form.
//! * [`decouple`] — streaming pressure -> wrench runtime.
//! * [`eval`] — per-axis error metrics and static-response regression.
//! * [`sysid`] — first-order transfer-function identification and Bode data.

pub mod calib;
pub mod config;
pub mod decouple;
pub mod error;
pub mod eval;
pub mod model;
pub mod sim;
pub mod sysid;
pub mod wrench;

pub use config::ModelConfig;
pub use error::{Error, Result};
pub use model::SensorModel;
pub use wrench::{Capacity, Wrench, AXIS_NAMES, BLOCK_AXIS_ORDER};

/// Number of pressure channels (8 lower + 8 upper).
pub const NUM_CHANNELS: usize = 16;
/// Number of chambers per layer.
pub const CHAMBERS_PER_LAYER: usize = 8;
/// Number of wrench axes.
pub const NUM_AXES: usize = 6;

/// 6-vector over wrench axes.
pub type Vec6 = nalgebra::SVector<f64, 6>;
/// 8-vector over one layer's chambers.
pub type Vec8 = nalgebra::SVector<f64, 8>;
/// 16-vector over all pressure channels, lower 1-8 then upper 1-8.
pub type Vec16 = nalgebra::SVector<f64, 16>;
/// Per-layer direction matrix (chamber arc integrals of [cos, sin]).
pub type Mat8x2 = nalgebra::SMatrix<f64, 8, 2>;
/// Per-layer coupling block mapping a 3-axis load group to volume changes.
pub type Mat8x3 = nalgebra::SMatrix<f64, 8, 3>;
/// Decoupling matrix, rows in block axis order.
pub type Mat6x16 = nalgebra::SMatrix<f64, 6, 16>;
