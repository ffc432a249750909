//! Assembled coupling matrices: the linear maps from grouped load axes to
//! per-chamber volume change.
//!
//! The lower layer responds only to the (Fz, Tx, Ty) group; the upper layer
//! responds to (Fx, Fy, Tz) directly and to (Fz, Tx, Ty) through the shared
//! compression/tilt mechanism:
//!
//! ```text
//! dV_lower = T_l   * [Fz, Tx, Ty]
//! dV_upper = T_u1  * [Fx, Fy, Tz]  +  T_u2 * [Fz, Tx, Ty]
//! ```
//!
//! with `T_l = [-alpha_l*ones | lambda_l*Txy]`, `T_u1 = [beta_u*Txy | xi_u*pairing]`
//! and `T_u2 = [-alpha_u*ones | lambda_u*Txy]`.

use crate::error::{Error, Result};
use crate::model::geometry::{direction_matrix, SensorLayout};
use crate::model::material::{LayerScalars, MaterialConfig};
use crate::{Mat8x2, Mat8x3, Vec8};

/// Direction matrices, per-layer scalars and the assembled coupling blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrices {
    /// All-ones compression pattern.
    pub t_fz: [f64; 8],
    /// Lower-layer direction matrix (arc integrals of [cos, sin]).
    pub t_xy_lower: Mat8x2,
    /// Upper-layer direction matrix.
    pub t_xy_upper: Mat8x2,
    /// Twist polarity pattern (four +1, four -1).
    pub t_tz: [f64; 8],
    pub lower_scalars: LayerScalars,
    pub upper_scalars: LayerScalars,
    /// Lower block: columns (Fz, Tx, Ty).
    pub t_l: Mat8x3,
    /// Upper direct block: columns (Fx, Fy, Tz).
    pub t_u1: Mat8x3,
    /// Upper cross block: columns (Fz, Tx, Ty).
    pub t_u2: Mat8x3,
}

impl CouplingMatrices {
    /// Computes scalars from materials and assembles the three blocks.
    ///
    /// Fails when either assembled block that must be inverted downstream
    /// (`T_l`, `T_u1`) is column-rank deficient, which signals a layout that
    /// cannot separate the three axes of its group.
    pub fn new(layout: &SensorLayout, materials: &MaterialConfig) -> Result<Self> {
        materials.validate()?;
        let t_xy_lower = direction_matrix(&layout.lower);
        let t_xy_upper = direction_matrix(&layout.upper);
        let lower_scalars =
            LayerScalars::compute(layout, &materials.lower, layout.lower[0].span_rad);
        let upper_scalars =
            LayerScalars::compute(layout, &materials.upper, layout.upper[0].span_rad);

        let t_l = assemble_ones_xy(lower_scalars.alpha, lower_scalars.lambda, &t_xy_lower);
        let t_u2 = assemble_ones_xy(upper_scalars.alpha, upper_scalars.lambda, &t_xy_upper);
        let t_u1 = assemble_xy_tz(
            upper_scalars.beta,
            upper_scalars.xi,
            &t_xy_upper,
            &layout.pairing,
        );

        check_full_column_rank("T_l", &t_l)?;
        check_full_column_rank("T_u1", &t_u1)?;

        Ok(CouplingMatrices {
            t_fz: [1.0; 8],
            t_xy_lower,
            t_xy_upper,
            t_tz: layout.pairing,
            lower_scalars,
            upper_scalars,
            t_l,
            t_u1,
            t_u2,
        })
    }
}

/// `[-alpha * ones | lambda * Txy]`, columns (Fz, Tx, Ty).
fn assemble_ones_xy(alpha: f64, lambda: f64, t_xy: &Mat8x2) -> Mat8x3 {
    let mut m = Mat8x3::zeros();
    for k in 0..8 {
        m[(k, 0)] = -alpha;
        m[(k, 1)] = lambda * t_xy[(k, 0)];
        m[(k, 2)] = lambda * t_xy[(k, 1)];
    }
    m
}

/// `[beta * Txy | xi * pairing]`, columns (Fx, Fy, Tz).
fn assemble_xy_tz(beta: f64, xi: f64, t_xy: &Mat8x2, pairing: &[f64; 8]) -> Mat8x3 {
    let mut m = Mat8x3::zeros();
    for k in 0..8 {
        m[(k, 0)] = beta * t_xy[(k, 0)];
        m[(k, 1)] = beta * t_xy[(k, 1)];
        m[(k, 2)] = xi * pairing[k];
    }
    m
}

fn check_full_column_rank(name: &str, m: &Mat8x3) -> Result<()> {
    if numeric_rank(m) < 3 {
        return Err(Error::DegenerateLayout(format!(
            "{name} is column-rank deficient; the layout cannot separate its three axes"
        )));
    }
    Ok(())
}

/// Rank by singular values above a scaled epsilon.
pub fn numeric_rank(m: &Mat8x3) -> usize {
    let sv = m.singular_values();
    let tol = sv.max() * 8.0 * f64::EPSILON;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Volume change of one layer's chambers for a pure normal force.
pub fn dv_normal_force(fz: f64, scalars: &LayerScalars) -> Vec8 {
    Vec8::from_element(-scalars.alpha * fz)
}

/// Volume change of the upper chambers for a pure shear force; the lower
/// layer is unaffected by shear.
pub fn dv_shear_force(fx: f64, fy: f64, scalars: &LayerScalars, t_xy: &Mat8x2) -> Vec8 {
    Vec8::from_fn(|k, _| scalars.beta * (t_xy[(k, 0)] * fx + t_xy[(k, 1)] * fy))
}

/// Volume change of the upper chambers for a pure z torque; the lower layer
/// is unaffected by twist.
pub fn dv_torque_z(tz: f64, scalars: &LayerScalars, pairing: &[f64; 8]) -> Vec8 {
    Vec8::from_fn(|k, _| scalars.xi * pairing[k] * tz)
}

/// Volume change of one layer's chambers for a pure x/y torque.
pub fn dv_torque_xy(tx: f64, ty: f64, scalars: &LayerScalars, t_xy: &Mat8x2) -> Vec8 {
    Vec8::from_fn(|k, _| scalars.lambda * (t_xy[(k, 0)] * tx + t_xy[(k, 1)] * ty))
}
