//! Elastic parameters of one layer and the load-to-volume scalars they fix.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::geometry::SensorLayout;

/// Linear-elastic parameters of one layer's silicone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerMaterial {
    /// Young's modulus, Pa.
    pub youngs_modulus_pa: f64,
    /// Poisson ratio, in (0, 0.5).
    pub poisson_ratio: f64,
    /// Pillar cross-section perpendicular to normal stress, m^2.
    pub pillar_area_m2: f64,
    /// Pillar cross-section perpendicular to shear stress, m^2.
    pub pillar_shear_area_m2: f64,
    /// Shear modulus on the inner twist surface, Pa.
    pub shear_modulus_inner_pa: f64,
    /// Shear modulus on the outer twist surface, Pa.
    pub shear_modulus_outer_pa: f64,
    /// Inner twist shear area, m^2.
    pub shear_area_inner_m2: f64,
    /// Outer twist shear area, m^2.
    pub shear_area_outer_m2: f64,
}

impl LayerMaterial {
    /// Reference silicone parameter set for a pillar of radius `r0`.
    ///
    /// G = E / (2(1+nu)); the two twist shear areas are deliberately unequal
    /// so the twist sensitivity does not vanish.
    pub fn reference(pillar_radius_m: f64) -> Self {
        let e = 0.5e6;
        let nu = 0.49;
        let s = PI * pillar_radius_m * pillar_radius_m;
        let g = e / (2.0 * (1.0 + nu));
        LayerMaterial {
            youngs_modulus_pa: e,
            poisson_ratio: nu,
            pillar_area_m2: s,
            pillar_shear_area_m2: s,
            shear_modulus_inner_pa: g,
            shear_modulus_outer_pa: g,
            shear_area_inner_m2: s,
            shear_area_outer_m2: s / 14.0,
        }
    }

    pub fn validate(&self, layer: &str) -> Result<()> {
        let positives = [
            ("Young's modulus", self.youngs_modulus_pa),
            ("pillar area", self.pillar_area_m2),
            ("pillar shear area", self.pillar_shear_area_m2),
            ("inner shear modulus", self.shear_modulus_inner_pa),
            ("outer shear modulus", self.shear_modulus_outer_pa),
            ("inner shear area", self.shear_area_inner_m2),
            ("outer shear area", self.shear_area_outer_m2),
        ];
        for (name, v) in positives {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidMaterial(format!(
                    "{layer} layer {name} must be positive, got {v}"
                )));
            }
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(Error::InvalidMaterial(format!(
                "{layer} layer Poisson ratio must lie in (0, 0.5), got {}",
                self.poisson_ratio
            )));
        }
        Ok(())
    }
}

/// Per-layer materials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub lower: LayerMaterial,
    pub upper: LayerMaterial,
}

impl MaterialConfig {
    pub fn reference(pillar_radius_m: f64) -> Self {
        let layer = LayerMaterial::reference(pillar_radius_m);
        MaterialConfig {
            lower: layer,
            upper: layer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lower.validate("lower")?;
        self.upper.validate("upper")
    }
}

/// Volume-change-per-load scalars of one layer.
///
/// Each scalar is the constant of the linear law for one load case:
/// compression `dV = -alpha * Fz` per chamber, shear `dV = beta * Txy * [Fx, Fy]`,
/// twist `dV = xi * pairing * Tz`, tilt `dV = lambda * Txy * [Tx, Ty]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerScalars {
    /// m^3 per N of normal force (per chamber).
    pub alpha: f64,
    /// m^3 per N of shear force (per unit direction weight).
    pub beta: f64,
    /// m^3 per N*m of z torque (per chamber).
    pub xi: f64,
    /// m^3 per N*m of x/y torque (per unit direction weight).
    pub lambda: f64,
}

impl LayerScalars {
    /// Evaluates the four scalars from geometry and one layer's material.
    ///
    /// `arc_span_rad` is this layer's chamber span; only the compression
    /// scalar depends on it (the others integrate the arc through the
    /// direction matrix or are span-free).
    pub fn compute(layout: &SensorLayout, mat: &LayerMaterial, arc_span_rad: f64) -> Self {
        let r0 = layout.pillar_radius_m;
        let big_r = layout.outer_radius_m;
        let h0 = layout.layer_height_m;
        let r = layout.mean_radius_m;
        let e = mat.youngs_modulus_pa;
        let nu = mat.poisson_ratio;

        let alpha = arc_span_rad * r * h0 * (big_r + nu * r0) / (e * mat.pillar_area_m2);
        let beta = (1.0 + nu) * r * h0 * h0 / (e * mat.pillar_shear_area_m2);
        let xi = 0.25
            * (big_r - r0)
            * r0
            * h0
            * (1.0 / (mat.shear_modulus_outer_pa * mat.shear_area_outer_m2)
                - 1.0 / (mat.shear_modulus_inner_pa * mat.shear_area_inner_m2));
        let lambda =
            r * h0 * (big_r * big_r - r0 * r0) / (2.0 * e * mat.pillar_shear_area_m2 * big_r * big_r);

        LayerScalars {
            alpha,
            beta,
            xi,
            lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::geometry::{build_layout, GeometryConfig};
    use approx::assert_relative_eq;

    #[test]
    fn reference_alpha_matches_independent_arithmetic() {
        // Frozen from a direct evaluation of the compression law with
        // R0 = 40 mm, r0 = 6 mm, h0 = 8 mm, E = 0.5 MPa, nu = 0.49,
        // S = pi*r0^2, span = pi/8.
        let layout = build_layout(&GeometryConfig::default()).unwrap();
        let mat = LayerMaterial::reference(0.006);
        let s = LayerScalars::compute(&layout, &mat, std::f64::consts::PI / 8.0);
        assert_relative_eq!(s.alpha, 5.486777777777777e-8, max_relative = 1e-14);
    }

    #[test]
    fn doubling_stiffness_halves_load_scalars() {
        let layout = build_layout(&GeometryConfig::default()).unwrap();
        let mat = LayerMaterial::reference(0.006);
        let stiff = LayerMaterial {
            youngs_modulus_pa: 2.0 * mat.youngs_modulus_pa,
            // Shear moduli track E for a fixed Poisson ratio.
            shear_modulus_inner_pa: 2.0 * mat.shear_modulus_inner_pa,
            shear_modulus_outer_pa: 2.0 * mat.shear_modulus_outer_pa,
            ..mat
        };
        let span = std::f64::consts::PI / 8.0;
        let a = LayerScalars::compute(&layout, &mat, span);
        let b = LayerScalars::compute(&layout, &stiff, span);
        assert_relative_eq!(b.alpha, 0.5 * a.alpha, max_relative = 1e-14);
        assert_relative_eq!(b.beta, 0.5 * a.beta, max_relative = 1e-14);
        assert_relative_eq!(b.xi, 0.5 * a.xi, max_relative = 1e-14);
        assert_relative_eq!(b.lambda, 0.5 * a.lambda, max_relative = 1e-14);
    }

    #[test]
    fn poisson_ratio_bounds_enforced() {
        let mut mat = LayerMaterial::reference(0.006);
        mat.poisson_ratio = 0.5;
        assert!(mat.validate("upper").is_err());
    }
}
