//! Decoupling-matrix calibration: dense, block and structured least squares.

pub mod fit;
pub mod lstsq;

pub use fit::{
    assemble_k, assemble_k_scaled, fit_block, fit_dense, fit_structured, CalibrationData,
    CalibrationFile, CalibrationOptions, CalibrationResult, Diagnostics, Strategy,
    StructuredScalars, CALIBRATION_SCHEMA_VERSION, SCALAR_NAMES,
};
pub use lstsq::{lstsq, Lstsq};
