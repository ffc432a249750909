//! Six-axis wrench type, axis ordering conventions and capacity limits.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::Vec6;

/// Canonical axis names, index order (Fx, Fy, Fz, Tx, Ty, Tz).
pub const AXIS_NAMES: [&str; 6] = ["Fx", "Fy", "Fz", "Tx", "Ty", "Tz"];

/// Block axis order used by the decoupling matrix rows: the upper-layer
/// group (Fx, Fy, Tz) first, then the lower-layer group (Fz, Tx, Ty).
/// Entry `i` is the canonical index of block slot `i`.
pub const BLOCK_AXIS_ORDER: [usize; 6] = [0, 1, 5, 2, 3, 4];

/// Applied six-axis load. Forces in newtons, torques in newton-metres.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wrench {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

impl Wrench {
    pub const ZERO: Wrench = Wrench {
        fx: 0.0,
        fy: 0.0,
        fz: 0.0,
        tx: 0.0,
        ty: 0.0,
        tz: 0.0,
    };

    pub fn new(fx: f64, fy: f64, fz: f64, tx: f64, ty: f64, tz: f64) -> Self {
        Self {
            fx,
            fy,
            fz,
            tx,
            ty,
            tz,
        }
    }

    /// Components in canonical order (Fx, Fy, Fz, Tx, Ty, Tz).
    pub fn to_array(self) -> [f64; 6] {
        [self.fx, self.fy, self.fz, self.tx, self.ty, self.tz]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    /// Components in block order (Fx, Fy, Tz, Fz, Tx, Ty).
    pub fn to_block_order(self) -> [f64; 6] {
        let c = self.to_array();
        let mut out = [0.0; 6];
        for (slot, &canon) in BLOCK_AXIS_ORDER.iter().enumerate() {
            out[slot] = c[canon];
        }
        out
    }

    pub fn from_block_order(b: [f64; 6]) -> Self {
        let mut c = [0.0; 6];
        for (slot, &canon) in BLOCK_AXIS_ORDER.iter().enumerate() {
            c[canon] = b[slot];
        }
        Self::from_array(c)
    }

    pub fn to_vector(self) -> Vec6 {
        Vec6::from_column_slice(&self.to_array())
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Largest absolute component, forces and torques mixed.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for Wrench {
    type Output = Wrench;
    fn add(self, rhs: Wrench) -> Wrench {
        Wrench::new(
            self.fx + rhs.fx,
            self.fy + rhs.fy,
            self.fz + rhs.fz,
            self.tx + rhs.tx,
            self.ty + rhs.ty,
            self.tz + rhs.tz,
        )
    }
}

impl Sub for Wrench {
    type Output = Wrench;
    fn sub(self, rhs: Wrench) -> Wrench {
        Wrench::new(
            self.fx - rhs.fx,
            self.fy - rhs.fy,
            self.fz - rhs.fz,
            self.tx - rhs.tx,
            self.ty - rhs.ty,
            self.tz - rhs.tz,
        )
    }
}

impl Mul<f64> for Wrench {
    type Output = Wrench;
    fn mul(self, s: f64) -> Wrench {
        Wrench::new(
            self.fx * s,
            self.fy * s,
            self.fz * s,
            self.tx * s,
            self.ty * s,
            self.tz * s,
        )
    }
}

/// Rated per-axis measuring range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    /// Limit for each force axis, N.
    pub force_n: f64,
    /// Limit for each torque axis, N*m.
    pub torque_nm: f64,
}

impl Default for Capacity {
    /// Rated range of the prototype: 50 N force, 1 N*m torque.
    fn default() -> Self {
        Capacity {
            force_n: 50.0,
            torque_nm: 1.0,
        }
    }
}

impl Capacity {
    /// Limit for canonical axis index `i`.
    pub fn axis_limit(&self, i: usize) -> f64 {
        if i < 3 {
            self.force_n
        } else {
            self.torque_nm
        }
    }

    /// Errors with the first offending axis if `w` exceeds the rated range.
    pub fn check(&self, w: Wrench) -> Result<()> {
        let c = w.to_array();
        for (i, &v) in c.iter().enumerate() {
            let limit = self.axis_limit(i);
            if !v.is_finite() || v.abs() > limit {
                return Err(Error::CapacityExceeded {
                    axis: AXIS_NAMES[i],
                    value: v,
                    limit,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_order_round_trip() {
        let w = Wrench::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0);
        let b = w.to_block_order();
        assert_eq!(b, [1.0, 2.0, 6.0, 3.0, 4.0, 5.0]);
        assert_eq!(Wrench::from_block_order(b), w);
    }

    #[test]
    fn capacity_names_offending_axis() {
        let cap = Capacity::default();
        let err = cap
            .check(Wrench::new(0.0, 0.0, 0.0, 1.5, 0.0, 0.0))
            .unwrap_err();
        match err {
            Error::CapacityExceeded { axis, .. } => assert_eq!(axis, "Tx"),
            other => panic!("unexpected error {other}"),
        }
    }
}
