//! Strain-level view of the four single-axis load cases.
//!
//! Useful for inspecting the deformation math behind the volume-change
//! scalars; every strain is linear in its load component.

use serde::{Deserialize, Serialize};

use crate::model::geometry::SensorLayout;
use crate::model::material::LayerMaterial;

/// One single-axis load case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleAxisLoad {
    /// Normal force Fz, N.
    NormalForce(f64),
    /// Shear force (Fx, Fy), N.
    ShearForce(f64, f64),
    /// Twist torque Tz, N*m.
    TorqueZ(f64),
    /// Tilt torque (Tx, Ty), N*m.
    TorqueXy(f64, f64),
}

/// Strains induced in one layer by a single-axis load.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DeformationStrains {
    /// Normal strain of the pillar under Fz.
    pub eps_zz: f64,
    /// Lateral (Poisson) strain of the pillar under Fz.
    pub eps_zx: f64,
    /// Shear strain of the active case (pillar shear or tilt shear).
    pub gamma: f64,
    /// Inner twist-surface shear strain under Tz.
    pub gamma_inner: f64,
    /// Outer twist-surface shear strain under Tz.
    pub gamma_outer: f64,
    /// Edge strain of the tilted plate under Tx/Ty.
    pub eps_p: f64,
    /// Load reference direction in the sensor plane, rad.
    pub theta_p: f64,
}

/// Evaluates the strain set of `load` for one layer.
pub fn strains(layout: &SensorLayout, mat: &LayerMaterial, load: SingleAxisLoad) -> DeformationStrains {
    let e = mat.youngs_modulus_pa;
    let mut out = DeformationStrains::default();
    match load {
        SingleAxisLoad::NormalForce(fz) => {
            out.eps_zz = fz / (e * mat.pillar_area_m2);
            out.eps_zx = -mat.poisson_ratio * fz / (e * mat.pillar_area_m2);
        }
        SingleAxisLoad::ShearForce(fx, fy) => {
            let f = fx.hypot(fy);
            let sigma = f / mat.pillar_shear_area_m2;
            out.gamma = 2.0 * (1.0 + mat.poisson_ratio) * sigma / e;
            out.theta_p = fy.atan2(fx);
        }
        SingleAxisLoad::TorqueZ(tz) => {
            out.gamma_inner = tz / (mat.shear_modulus_inner_pa * mat.shear_area_inner_m2);
            out.gamma_outer = tz / (mat.shear_modulus_outer_pa * mat.shear_area_outer_m2);
        }
        SingleAxisLoad::TorqueXy(tx, ty) => {
            let t = tx.hypot(ty);
            // Edge strain of the inclined plate, reconstructed so that the
            // tilt shear gamma = h0 * eps_p / R0 matches the tilt law.
            out.eps_p = t / (e * mat.pillar_shear_area_m2 * layout.outer_radius_m);
            out.gamma = layout.layer_height_m * out.eps_p / layout.outer_radius_m;
            out.theta_p = ty.atan2(tx);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::geometry::{build_layout, GeometryConfig};
    use approx::assert_relative_eq;

    #[test]
    fn strains_are_linear_in_the_load() {
        let layout = build_layout(&GeometryConfig::default()).unwrap();
        let mat = LayerMaterial::reference(layout.pillar_radius_m);
        let a = strains(&layout, &mat, SingleAxisLoad::NormalForce(10.0));
        let b = strains(&layout, &mat, SingleAxisLoad::NormalForce(30.0));
        assert_relative_eq!(b.eps_zz, 3.0 * a.eps_zz, max_relative = 1e-14);
        assert_relative_eq!(b.eps_zx, 3.0 * a.eps_zx, max_relative = 1e-14);

        let a = strains(&layout, &mat, SingleAxisLoad::TorqueZ(0.2));
        let b = strains(&layout, &mat, SingleAxisLoad::TorqueZ(1.0));
        assert_relative_eq!(b.gamma_inner, 5.0 * a.gamma_inner, max_relative = 1e-14);
        assert_relative_eq!(b.gamma_outer, 5.0 * a.gamma_outer, max_relative = 1e-14);
    }

    #[test]
    fn shear_direction_recorded() {
        let layout = build_layout(&GeometryConfig::default()).unwrap();
        let mat = LayerMaterial::reference(layout.pillar_radius_m);
        let s = strains(&layout, &mat, SingleAxisLoad::ShearForce(0.0, 5.0));
        assert_relative_eq!(s.theta_p, std::f64::consts::FRAC_PI_2);
        assert!(s.gamma > 0.0);
    }
}
