//! Chamber layout: annular chambers on two layers, described by arc spans.
//!
//! Each chamber occupies an angular arc of the annulus between the central
//! support pillar (radius `r0`) and the outer wall (radius `R0`). The lower
//! layer holds eight evenly spaced chambers; the upper layer holds eight
//! chambers arranged as four adjacent pairs with opposite twist polarity so
//! that a z-axis torque inflates one chamber of each pair and deflates the
//! other.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::{Mat8x2, Vec8, CHAMBERS_PER_LAYER};

/// Raw geometry parameters as found in a model file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Outer wall radius, m.
    pub outer_radius_m: f64,
    /// Central pillar radius, m.
    pub pillar_radius_m: f64,
    /// Height of one layer's cavity, m.
    pub layer_height_m: f64,
    /// Angular span of each lower chamber, rad.
    #[serde(default = "default_arc_span")]
    pub lower_arc_span_rad: f64,
    /// Angular span of each upper chamber, rad.
    #[serde(default = "default_arc_span")]
    pub upper_arc_span_rad: f64,
    /// Angular offset of each upper chamber from its pair centre, rad.
    #[serde(default = "default_arc_span")]
    pub upper_pair_half_gap_rad: f64,
    /// Explicit lower chamber centres; evenly spaced when omitted.
    #[serde(default)]
    pub lower_centers_rad: Option<[f64; 8]>,
    /// Explicit upper chamber centres; paired placement when omitted.
    #[serde(default)]
    pub upper_centers_rad: Option<[f64; 8]>,
    /// Twist polarity of each upper chamber; alternating when omitted.
    #[serde(default)]
    pub upper_pairing: Option<[i8; 8]>,
}

fn default_arc_span() -> f64 {
    PI / 8.0
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            outer_radius_m: 0.040,
            pillar_radius_m: 0.006,
            layer_height_m: 0.008,
            lower_arc_span_rad: PI / 8.0,
            upper_arc_span_rad: PI / 8.0,
            upper_pair_half_gap_rad: PI / 8.0,
            lower_centers_rad: None,
            upper_centers_rad: None,
            upper_pairing: None,
        }
    }
}

/// One chamber's angular placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chamber {
    /// Arc centre, rad.
    pub center_rad: f64,
    /// Arc span, rad.
    pub span_rad: f64,
}

impl Chamber {
    pub fn start(&self) -> f64 {
        self.center_rad - 0.5 * self.span_rad
    }

    pub fn end(&self) -> f64 {
        self.center_rad + 0.5 * self.span_rad
    }
}

/// Validated sensor layout with derived chamber arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorLayout {
    pub outer_radius_m: f64,
    pub pillar_radius_m: f64,
    pub layer_height_m: f64,
    /// Mid-annulus radius (R0 + r0) / 2, m.
    pub mean_radius_m: f64,
    pub lower: [Chamber; 8],
    pub upper: [Chamber; 8],
    /// Twist polarity per upper chamber, four +1 and four -1.
    pub pairing: [f64; 8],
}

/// Validates raw geometry and derives chamber arcs.
///
/// Default placement: lower chambers evenly at pitch pi/4; upper chambers
/// as four pairs centred at pi/8 + j*pi/2, each member offset by the pair
/// half-gap (the default half-gap reproduces the even pi/4 grid).
pub fn build_layout(config: &GeometryConfig) -> Result<SensorLayout> {
    let g = config;
    let radii_ok = g.pillar_radius_m > 0.0 && g.pillar_radius_m < g.outer_radius_m;
    if !radii_ok {
        return Err(Error::InvalidGeometry(format!(
            "need 0 < pillar radius < outer radius, got r0={} R0={}",
            g.pillar_radius_m, g.outer_radius_m
        )));
    }
    let height_ok = g.layer_height_m > 0.0;
    if !height_ok {
        return Err(Error::InvalidGeometry(format!(
            "layer height must be positive, got {}",
            g.layer_height_m
        )));
    }
    for (name, span) in [
        ("lower arc span", g.lower_arc_span_rad),
        ("upper arc span", g.upper_arc_span_rad),
    ] {
        let span_ok = span > 0.0 && span < TAU;
        if !span_ok {
            return Err(Error::InvalidGeometry(format!(
                "{name} must lie in (0, 2*pi), got {span}"
            )));
        }
    }

    let lower_centers = g
        .lower_centers_rad
        .unwrap_or_else(|| std::array::from_fn(|k| k as f64 * PI / 4.0));
    let upper_centers = g.upper_centers_rad.unwrap_or_else(|| {
        std::array::from_fn(|k| {
            let pair_center = PI / 8.0 + (k / 2) as f64 * PI / 2.0;
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            pair_center + sign * g.upper_pair_half_gap_rad
        })
    });
    let pairing_raw = g.upper_pairing.unwrap_or([1, -1, 1, -1, 1, -1, 1, -1]);

    let mut pairing = [0.0; 8];
    let mut plus = 0;
    for (k, &s) in pairing_raw.iter().enumerate() {
        match s {
            1 => {
                plus += 1;
                pairing[k] = 1.0;
            }
            -1 => pairing[k] = -1.0,
            other => {
                return Err(Error::InvalidGeometry(format!(
                    "pairing entries must be +1 or -1, got {other} at index {k}"
                )))
            }
        }
    }
    if plus != 4 {
        return Err(Error::InvalidGeometry(format!(
            "pairing must hold four +1 and four -1 entries, got {plus} positive"
        )));
    }

    let lower = make_arcs(&lower_centers, g.lower_arc_span_rad);
    let upper = make_arcs(&upper_centers, g.upper_arc_span_rad);
    check_disjoint("lower", &lower)?;
    check_disjoint("upper", &upper)?;

    Ok(SensorLayout {
        outer_radius_m: g.outer_radius_m,
        pillar_radius_m: g.pillar_radius_m,
        layer_height_m: g.layer_height_m,
        mean_radius_m: 0.5 * (g.outer_radius_m + g.pillar_radius_m),
        lower,
        upper,
        pairing,
    })
}

fn make_arcs(centers: &[f64; 8], span: f64) -> [Chamber; 8] {
    std::array::from_fn(|k| Chamber {
        center_rad: centers[k],
        span_rad: span,
    })
}

fn check_disjoint(layer: &str, arcs: &[Chamber; 8]) -> Result<()> {
    // Uniform spans: arcs are disjoint iff consecutive centres (on the
    // circle) are at least one span apart.
    let total: f64 = arcs.iter().map(|c| c.span_rad).sum();
    if total > TAU {
        return Err(Error::InvalidGeometry(format!(
            "{layer} chamber arcs overlap: total span {total:.4} rad exceeds 2*pi"
        )));
    }
    let mut centers: Vec<f64> = arcs.iter().map(|c| c.center_rad.rem_euclid(TAU)).collect();
    centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let span = arcs[0].span_rad;
    for i in 0..CHAMBERS_PER_LAYER {
        let next = centers[(i + 1) % CHAMBERS_PER_LAYER];
        // rem_euclid handles the wrap from the last centre back to the first;
        // duplicate centres yield gap 0 and are rejected.
        let gap = (next - centers[i]).rem_euclid(TAU);
        if gap < span - 1e-12 {
            return Err(Error::InvalidGeometry(format!(
                "{layer} chamber arcs overlap: centre gap {gap:.4} rad < span {span:.4} rad"
            )));
        }
    }
    Ok(())
}

/// Direction matrix of one layer: row k is the integral of [cos, sin] over
/// chamber k's arc, i.e. [sin t2 - sin t1, cos t1 - cos t2].
///
/// Multiplying a row by a planar load [x, y] gives that chamber's response
/// weight proportional to cos(theta - theta_p) integrated over the arc, so
/// opposite chambers of a symmetric layout get opposite signs and the rows
/// of an evenly spaced layout sum to zero.
pub fn direction_matrix(arcs: &[Chamber; 8]) -> Mat8x2 {
    let mut m = Mat8x2::zeros();
    for (k, c) in arcs.iter().enumerate() {
        let (t1, t2) = (c.start(), c.end());
        m[(k, 0)] = t2.sin() - t1.sin();
        m[(k, 1)] = t1.cos() - t2.cos();
    }
    m
}

/// Undeformed gas volume of each chamber: arc length at the mean radius
/// times the radial depth times the layer height.
pub fn chamber_volumes(layout: &SensorLayout, arcs: &[Chamber; 8]) -> Vec8 {
    let depth = layout.outer_radius_m - layout.pillar_radius_m;
    Vec8::from_fn(|k, _| layout.mean_radius_m * arcs[k].span_rad * layout.layer_height_m * depth)
}
