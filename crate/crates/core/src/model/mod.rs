//! Parametric forward physics of the two-layer 16-chamber sensor.

pub mod coupling;
pub mod gas;
pub mod geometry;
pub mod material;
pub mod strain;

pub use coupling::{
    dv_normal_force, dv_shear_force, dv_torque_xy, dv_torque_z, CouplingMatrices,
};
pub use gas::{pressure_from_volume, ChamberGasState, GasConfig, PerChannel};
pub use geometry::{build_layout, direction_matrix, Chamber, GeometryConfig, SensorLayout};
pub use material::{LayerMaterial, LayerScalars, MaterialConfig};
pub use strain::{strains, DeformationStrains, SingleAxisLoad};

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::wrench::{Capacity, Wrench};
use crate::{Vec16, Vec8};

/// Immutable sensor model: validated layout, materials, gas state and the
/// assembled coupling matrices. All evaluation methods are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    pub layout: SensorLayout,
    pub materials: MaterialConfig,
    pub gas: ChamberGasState,
    pub coupling: CouplingMatrices,
    pub capacity: Capacity,
}

impl SensorModel {
    pub fn from_config(config: &ModelConfig) -> Result<Self> {
        config.check_schema()?;
        let layout = build_layout(&config.geometry)?;
        let gas = ChamberGasState::from_config(&config.gas, &layout)?;
        let coupling = CouplingMatrices::new(&layout, &config.materials)?;
        Ok(SensorModel {
            layout,
            materials: config.materials,
            gas,
            coupling,
            capacity: config.capacity,
        })
    }

    /// Reference model with default geometry, materials and gas state.
    pub fn reference() -> Self {
        Self::from_config(&ModelConfig::default()).expect("reference model must build")
    }

    /// Volume change of all chambers under `w`, lower layer then upper.
    pub fn delta_volumes(&self, w: Wrench) -> (Vec8, Vec8) {
        let lower_group = nalgebra::Vector3::new(w.fz, w.tx, w.ty);
        let upper_group = nalgebra::Vector3::new(w.fx, w.fy, w.tz);
        let lower = self.coupling.t_l * lower_group;
        let upper = self.coupling.t_u1 * upper_group + self.coupling.t_u2 * lower_group;
        (lower, upper)
    }

    /// Volume change as a 16-vector, channels ordered lower 1-8, upper 1-8.
    pub fn volumes_from_wrench(&self, w: Wrench) -> Vec16 {
        let (lower, upper) = self.delta_volumes(w);
        Vec16::from_fn(|k, _| if k < 8 { lower[k] } else { upper[k - 8] })
    }

    /// Pressure change of all 16 channels under `w`, Pa.
    pub fn delta_pressures(&self, w: Wrench) -> Vec16 {
        let dv = self.volumes_from_wrench(w);
        pressure_from_volume(&dv, &self.gas)
    }

    /// Absolute channel pressures under `w`, Pa.
    pub fn absolute_pressures(&self, w: Wrench) -> [f64; 16] {
        let dp = self.delta_pressures(w);
        std::array::from_fn(|k| self.gas.p0[k] + dp[k])
    }

    /// The six volume-to-pressure-scaled sensitivity scalars
    /// `kappa * (alpha_l, lambda_l, beta_u, xi_u, alpha_u, lambda_u)`.
    ///
    /// Requires a uniform kappa within each layer; per-chamber gas spreads
    /// have no single set of six scalars.
    pub fn scaled_sensitivities(&self) -> Result<[f64; 6]> {
        let kappa_l = self.uniform_kappa(0..8)?;
        let kappa_u = self.uniform_kappa(8..16)?;
        let l = &self.coupling.lower_scalars;
        let u = &self.coupling.upper_scalars;
        Ok([
            kappa_l * l.alpha,
            kappa_l * l.lambda,
            kappa_u * u.beta,
            kappa_u * u.xi,
            kappa_u * u.alpha,
            kappa_u * u.lambda,
        ])
    }

    fn uniform_kappa(&self, range: std::ops::Range<usize>) -> Result<f64> {
        let first = self.gas.kappa(range.start);
        for k in range {
            let kk = self.gas.kappa(k);
            if ((kk - first) / first).abs() > 1e-12 {
                return Err(Error::InvalidGasState(
                    "per-chamber gas state is not uniform within a layer".into(),
                ));
            }
        }
        Ok(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_wrench(rng: &mut StdRng) -> Wrench {
        Wrench::new(
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    #[test]
    fn zero_wrench_gives_zero_response() {
        let model = SensorModel::reference();
        assert_eq!(model.volumes_from_wrench(Wrench::ZERO), Vec16::zeros());
        assert_eq!(model.delta_pressures(Wrench::ZERO), Vec16::zeros());
    }

    #[test]
    fn lower_layer_ignores_shear_and_twist() {
        let model = SensorModel::reference();
        let w = Wrench::new(12.0, -7.0, 0.0, 0.0, 0.0, 0.8);
        let dv = model.volumes_from_wrench(w);
        for k in 0..8 {
            assert_eq!(dv[k], 0.0);
        }
    }

    #[test]
    fn pure_fz_loads_each_layer_uniformly() {
        let model = SensorModel::reference();
        let dp = model.delta_pressures(Wrench::new(0.0, 0.0, 20.0, 0.0, 0.0, 0.0));
        for k in 1..8 {
            assert_relative_eq!(dp[k], dp[0], max_relative = 1e-13);
            assert_relative_eq!(dp[8 + k], dp[8], max_relative = 1e-13);
        }
        assert!(dp[0] > 0.0, "compression must raise pressure");
    }

    #[test]
    fn pure_tz_follows_pairing_with_zero_mean() {
        let model = SensorModel::reference();
        let dp = model.delta_pressures(Wrench::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.5));
        let mag = dp[8].abs();
        for k in 0..8 {
            assert_eq!(dp[k], 0.0);
            assert_relative_eq!(dp[8 + k].abs(), mag, max_relative = 1e-13);
        }
        let mean: f64 = (8..16).map(|k| dp[k]).sum::<f64>() / 8.0;
        assert!(mean.abs() < mag * 1e-12);
    }

    #[test]
    fn superposition_matches_single_case_sum() {
        // The assembled blocks must agree with the sum of the four
        // single-case laws on random wrenches.
        let model = SensorModel::reference();
        let c = &model.coupling;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let w = random_wrench(&mut rng);
            let (lower, upper) = model.delta_volumes(w);
            let lower_sum = dv_normal_force(w.fz, &c.lower_scalars)
                + dv_torque_xy(w.tx, w.ty, &c.lower_scalars, &c.t_xy_lower);
            let upper_sum = dv_normal_force(w.fz, &c.upper_scalars)
                + dv_torque_xy(w.tx, w.ty, &c.upper_scalars, &c.t_xy_upper)
                + dv_shear_force(w.fx, w.fy, &c.upper_scalars, &c.t_xy_upper)
                + dv_torque_z(w.tz, &c.upper_scalars, &model.layout.pairing);
            let scale = lower.amax().max(upper.amax());
            assert!((lower - lower_sum).amax() <= scale * 1e-12);
            assert!((upper - upper_sum).amax() <= scale * 1e-12);
        }
    }

    #[test]
    fn response_is_linear_in_the_wrench() {
        let model = SensorModel::reference();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_wrench(&mut rng);
            let b = random_wrench(&mut rng);
            let s: f64 = rng.random_range(-2.0..2.0);
            let combined = model.delta_pressures(a * s + b);
            let parts = model.delta_pressures(a) * s + model.delta_pressures(b);
            let scale = combined.amax().max(parts.amax()).max(1.0);
            assert!((combined - parts).amax() <= scale * 1e-12);
        }
    }

    #[test]
    fn scaled_sensitivities_require_uniform_gas() {
        let mut model = SensorModel::reference();
        model.gas.p0[3] *= 1.5;
        assert!(model.scaled_sensitivities().is_err());
    }
}
