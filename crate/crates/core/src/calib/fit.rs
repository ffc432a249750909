//! Decoupling matrix recovery from paired (pressure, reference wrench) logs.
//!
//! Three strategies of decreasing free-parameter count:
//!
//! * dense — all 96 entries of the 6x16 matrix by least squares;
//! * block — two independent problems exploiting the rigid lower layer:
//!   (Fz, Tx, Ty) on the lower 8 channels and (Fx, Fy, Tz) on all 16,
//!   72 parameters, with the lower-right 3x8 block exactly zero;
//! * structured — only the six sensitivity scalars, with the direction
//!   patterns fixed by the chamber layout.

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};

use crate::calib::lstsq::lstsq;
use crate::error::{Error, Result};
use crate::model::geometry::{direction_matrix, SensorLayout};
use crate::sim::log::SimLog;
use crate::wrench::{Capacity, Wrench, AXIS_NAMES, BLOCK_AXIS_ORDER};
use crate::{Mat6x16, Mat8x3, Vec16, CHAMBERS_PER_LAYER, NUM_CHANNELS};

pub const CALIBRATION_SCHEMA_VERSION: u32 = 1;

/// Names of the six structured scalars, kappa-scaled.
pub const SCALAR_NAMES: [&str; 6] = [
    "alpha_l", "lambda_l", "beta_u", "xi_u", "alpha_u", "lambda_u",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dense,
    Block,
    Structured,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Strategy::Dense),
            "block" => Ok(Strategy::Block),
            "structured" => Ok(Strategy::Structured),
            other => Err(Error::Schema(format!(
                "unknown strategy {other:?}; expected dense, block or structured"
            ))),
        }
    }
}

/// Fit options.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationOptions {
    /// No-load window at the start of the log used as the pressure
    /// baseline, s. Zero means the log already holds pressure deltas.
    pub tare_window_s: f64,
    /// Optional Tikhonov regularization for noisy ingested data.
    pub ridge: Option<f64>,
    /// Rated range used to judge per-axis excitation.
    pub capacity: Capacity,
    /// Structured scalars with magnitude below this are degenerate, Pa/N.
    pub degenerate_tol: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            tare_window_s: 0.5,
            ridge: None,
            capacity: Capacity::default(),
            degenerate_tol: 1e-6,
        }
    }
}

/// Fit quality and bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Free parameters solved for: 96 dense, 72 block, 6 structured.
    pub parameter_count: usize,
    /// Condition number of the regression design (worst block for block
    /// fits; of the scalar design for structured fits).
    pub condition_number: f64,
    /// Retained design rank (summed over blocks for block fits).
    pub design_rank: usize,
    /// Set when the condition number exceeds 1e8.
    pub ill_conditioned: bool,
    /// RMS of `K * dp - wrench` per axis, canonical order, axis units.
    pub residual_rms: [f64; 6],
}

/// Recovered decoupling matrix with fit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub strategy: Strategy,
    /// 6x16 decoupling matrix; rows in block order (Fx, Fy, Tz, Fz, Tx, Ty),
    /// columns lower channels 1-8 then upper 1-8.
    pub k: Mat6x16,
    /// The six kappa-scaled sensitivity scalars, structured fits only.
    pub scalars: Option<[f64; 6]>,
    pub diagnostics: Diagnostics,
}

impl CalibrationResult {
    /// Applies the decoupling matrix to a pressure delta.
    pub fn predict(&self, dp: &Vec16) -> Wrench {
        let block = self.k * dp;
        Wrench::from_block_order([block[0], block[1], block[2], block[3], block[4], block[5]])
    }
}

/// Tared samples extracted from a log: pressure deltas and reference
/// wrenches (block order), plus which axes carry signal.
#[derive(Debug, Clone)]
pub struct CalibrationData {
    /// N x 16 pressure deltas.
    pub dp: DMatrix<f64>,
    /// N x 6 reference wrench, block column order.
    pub wrench_block: DMatrix<f64>,
    /// Per canonical axis: does the reference move at all.
    pub excited: [bool; 6],
}

impl CalibrationData {
    /// Tares against the mean of the leading `tare_window_s` seconds and
    /// collects all rows. The window must be load-free for the baseline to
    /// be meaningful.
    pub fn from_log(log: &SimLog, options: &CalibrationOptions) -> Result<Self> {
        let n = log.rows.len();
        if n == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }

        let baseline = if options.tare_window_s > 0.0 {
            let t_end = log.rows[0].t + options.tare_window_s;
            let window: Vec<&[f64; 16]> = log
                .rows
                .iter()
                .take_while(|r| r.t < t_end)
                .map(|r| &r.pressures)
                .collect();
            if window.is_empty() {
                return Err(Error::EmptyTareWindow);
            }
            let mut mean = [0.0; 16];
            for p in &window {
                for (m, v) in mean.iter_mut().zip(p.iter()) {
                    *m += v;
                }
            }
            for m in mean.iter_mut() {
                *m /= window.len() as f64;
            }
            mean
        } else {
            [0.0; 16]
        };

        let mut dp = DMatrix::zeros(n, NUM_CHANNELS);
        let mut wrench_block = DMatrix::zeros(n, 6);
        let mut lo = [f64::INFINITY; 6];
        let mut hi = [f64::NEG_INFINITY; 6];
        for (i, row) in log.rows.iter().enumerate() {
            for k in 0..NUM_CHANNELS {
                dp[(i, k)] = row.pressures[k] - baseline[k];
            }
            let b = row.wrench.to_block_order();
            for (j, v) in b.iter().enumerate() {
                wrench_block[(i, j)] = *v;
            }
            for (j, v) in row.wrench.to_array().iter().enumerate() {
                lo[j] = lo[j].min(*v);
                hi[j] = hi[j].max(*v);
            }
        }

        let excited = std::array::from_fn(|j| {
            hi[j] - lo[j] > 1e-9 * options.capacity.axis_limit(j)
        });

        Ok(CalibrationData {
            dp,
            wrench_block,
            excited,
        })
    }

    fn require_excited(&self, needed: &[usize]) -> Result<()> {
        let missing: Vec<&'static str> = needed
            .iter()
            .filter(|&&j| !self.excited[j])
            .map(|&j| AXIS_NAMES[j])
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::InsufficientExcitation { axes: missing })
        }
    }

    /// At least one of `group` must be excited.
    fn require_group(&self, group: &[usize]) -> Result<()> {
        if group.iter().any(|&j| self.excited[j]) {
            Ok(())
        } else {
            Err(Error::InsufficientExcitation {
                axes: group.iter().map(|&j| AXIS_NAMES[j]).collect(),
            })
        }
    }
}

fn residuals_of(k: &Mat6x16, data: &CalibrationData) -> [f64; 6] {
    let n = data.dp.nrows();
    let mut ss = [0.0; 6];
    for i in 0..n {
        let dp = Vec16::from_fn(|c, _| data.dp[(i, c)]);
        let pred = k * dp;
        for slot in 0..6 {
            let d = pred[slot] - data.wrench_block[(i, slot)];
            ss[slot] += d * d;
        }
    }
    // Report per canonical axis.
    let mut out = [0.0; 6];
    for (slot, &canon) in BLOCK_AXIS_ORDER.iter().enumerate() {
        out[canon] = (ss[slot] / n as f64).sqrt();
    }
    out
}

fn diagnostics(
    parameter_count: usize,
    condition_number: f64,
    design_rank: usize,
    k: &Mat6x16,
    data: &CalibrationData,
) -> Diagnostics {
    Diagnostics {
        parameter_count,
        condition_number,
        design_rank,
        ill_conditioned: condition_number > 1e8,
        residual_rms: residuals_of(k, data),
    }
}

/// Dense fit: every entry of the decoupling matrix free (96 parameters).
pub fn fit_dense(data: &CalibrationData, options: &CalibrationOptions) -> Result<CalibrationResult> {
    let n = data.dp.nrows();
    if n < NUM_CHANNELS {
        return Err(Error::TooFewSamples {
            needed: NUM_CHANNELS,
            got: n,
        });
    }
    data.require_excited(&[0, 1, 2, 3, 4, 5])?;

    let sol = lstsq(&data.dp, &data.wrench_block, options.ridge)?;
    let parameter_count = data.dp.ncols() * data.wrench_block.ncols();
    let k = Mat6x16::from_fn(|row, col| sol.coeffs[(col, row)]);

    Ok(CalibrationResult {
        strategy: Strategy::Dense,
        k,
        scalars: None,
        diagnostics: diagnostics(parameter_count, sol.condition, sol.rank, &k, data),
    })
}

/// Block fit: (Fz, Tx, Ty) against the lower channels and (Fx, Fy, Tz)
/// against all 16, 72 parameters; the lower-right block is exactly zero.
pub fn fit_block(data: &CalibrationData, options: &CalibrationOptions) -> Result<CalibrationResult> {
    let n = data.dp.nrows();
    if n < NUM_CHANNELS {
        return Err(Error::TooFewSamples {
            needed: NUM_CHANNELS,
            got: n,
        });
    }
    data.require_excited(&[0, 1, 2, 3, 4, 5])?;

    let lower = data.dp.columns(0, CHAMBERS_PER_LAYER).into_owned();
    let lower_targets = data.wrench_block.columns(3, 3).into_owned();
    let sol_lower = lstsq(&lower, &lower_targets, options.ridge)?;

    let upper_targets = data.wrench_block.columns(0, 3).into_owned();
    let sol_upper = lstsq(&data.dp, &upper_targets, options.ridge)?;

    let parameter_count = CHAMBERS_PER_LAYER * 3 + NUM_CHANNELS * 3;
    let mut k = Mat6x16::zeros();
    for row in 0..3 {
        for col in 0..NUM_CHANNELS {
            k[(row, col)] = sol_upper.coeffs[(col, row)];
        }
        for col in 0..CHAMBERS_PER_LAYER {
            k[(row + 3, col)] = sol_lower.coeffs[(col, row)];
        }
        // Lower-right 3x8 block stays identically zero.
    }

    let condition = sol_lower.condition.max(sol_upper.condition);
    let rank = sol_lower.rank + sol_upper.rank;
    Ok(CalibrationResult {
        strategy: Strategy::Block,
        k,
        scalars: None,
        diagnostics: diagnostics(parameter_count, condition, rank, &k, data),
    })
}

/// Structured fit: six kappa-scaled sensitivity scalars with the direction
/// patterns fixed by the layout; the matrix is assembled from the scalars.
pub fn fit_structured(
    data: &CalibrationData,
    layout: &SensorLayout,
    options: &CalibrationOptions,
) -> Result<CalibrationResult> {
    let n = data.dp.nrows();
    if n < 6 {
        return Err(Error::TooFewSamples { needed: 6, got: n });
    }
    // Fz and Tz identify their scalars alone; shear and tilt enter through
    // a shared direction matrix, so one axis of each pair suffices.
    data.require_excited(&[2, 5])?;
    data.require_group(&[0, 1])?;
    data.require_group(&[3, 4])?;

    let t_xy_l = direction_matrix(&layout.lower);
    let t_xy_u = direction_matrix(&layout.upper);

    // Normal equations over all chamber observations, 6 unknowns:
    // lower k:  dp = a_l*(-Fz) + l_l*(txy_k . [Tx,Ty])
    // upper k:  dp = b_u*(txy_k . [Fx,Fy]) + x_u*(pair_k*Tz)
    //              + a_u*(-Fz) + l_u*(txy_k . [Tx,Ty])
    let mut gram = SMatrix::<f64, 6, 6>::zeros();
    let mut rhs = SMatrix::<f64, 6, 1>::zeros();
    for i in 0..n {
        let fx = data.wrench_block[(i, 0)];
        let fy = data.wrench_block[(i, 1)];
        let tz = data.wrench_block[(i, 2)];
        let fz = data.wrench_block[(i, 3)];
        let tx = data.wrench_block[(i, 4)];
        let ty = data.wrench_block[(i, 5)];
        for k in 0..CHAMBERS_PER_LAYER {
            let row = [
                -fz,
                t_xy_l[(k, 0)] * tx + t_xy_l[(k, 1)] * ty,
                0.0,
                0.0,
                0.0,
                0.0,
            ];
            accumulate(&mut gram, &mut rhs, &row, data.dp[(i, k)]);

            let row = [
                0.0,
                0.0,
                t_xy_u[(k, 0)] * fx + t_xy_u[(k, 1)] * fy,
                layout.pairing[k] * tz,
                -fz,
                t_xy_u[(k, 0)] * tx + t_xy_u[(k, 1)] * ty,
            ];
            accumulate(&mut gram, &mut rhs, &row, data.dp[(i, k + CHAMBERS_PER_LAYER)]);
        }
    }

    if let Some(r) = options.ridge {
        for j in 0..6 {
            gram[(j, j)] += r;
        }
    }

    let svd = gram.svd(true, true);
    let s_max = svd.singular_values.max();
    let tol = s_max * 6.0 * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&x| x > tol).count();
    if rank < 6 {
        return Err(Error::DegenerateRegression(
            "structured design is rank deficient despite excitation".into(),
        ));
    }
    let s_min = svd.singular_values.min();
    // Gram singular values are squares of the design's.
    let condition = (s_max / s_min).sqrt();
    let solved = svd
        .solve(&rhs, tol)
        .map_err(|e| Error::DegenerateRegression(e.to_string()))?;
    let scalars: [f64; 6] = std::array::from_fn(|j| solved[j]);

    for (name, value) in SCALAR_NAMES.iter().zip(scalars.iter()) {
        if value.abs() < options.degenerate_tol {
            return Err(Error::DegenerateSensitivity {
                scalar: name,
                value: *value,
            });
        }
    }

    let k = assemble_k_scaled(&scalars, layout)?;
    Ok(CalibrationResult {
        strategy: Strategy::Structured,
        k,
        scalars: Some(scalars),
        diagnostics: diagnostics(6, condition, rank, &k, data),
    })
}

fn accumulate(
    gram: &mut SMatrix<f64, 6, 6>,
    rhs: &mut SMatrix<f64, 6, 1>,
    row: &[f64; 6],
    y: f64,
) {
    for a in 0..6 {
        if row[a] == 0.0 {
            continue;
        }
        rhs[a] += row[a] * y;
        for b in 0..6 {
            gram[(a, b)] += row[a] * row[b];
        }
    }
}

/// The six physical sensitivity scalars before gas-law scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuredScalars {
    pub alpha_l: f64,
    pub lambda_l: f64,
    pub beta_u: f64,
    pub xi_u: f64,
    pub alpha_u: f64,
    pub lambda_u: f64,
}

/// Assembles the decoupling matrix from physical scalars and a shared
/// pressure-law constant `kappa` (Pa/m^3).
pub fn assemble_k(
    scalars: &StructuredScalars,
    layout: &SensorLayout,
    kappa: f64,
) -> Result<Mat6x16> {
    let scaled = [
        kappa * scalars.alpha_l,
        kappa * scalars.lambda_l,
        kappa * scalars.beta_u,
        kappa * scalars.xi_u,
        kappa * scalars.alpha_u,
        kappa * scalars.lambda_u,
    ];
    assemble_k_scaled(&scaled, layout)
}

/// Assembles the decoupling matrix from kappa-scaled scalars.
///
/// Builds the forward blocks, inverts the two invertible ones by
/// Moore-Penrose pseudo-inverse and cancels the upper layer's compression
/// crosstalk:
///
/// ```text
/// B_l  = pinv(P_l)            B_u2 = pinv(P_u1)
/// B_u1 = -B_u2 * P_u2 * B_l
/// K    = [ B_u1  B_u2 ]
///        [ B_l   0    ]
/// ```
pub fn assemble_k_scaled(scaled: &[f64; 6], layout: &SensorLayout) -> Result<Mat6x16> {
    let t_xy_l = direction_matrix(&layout.lower);
    let t_xy_u = direction_matrix(&layout.upper);
    let [a_l, l_l, b_u, x_u, a_u, l_u] = *scaled;

    let mut p_l = Mat8x3::zeros();
    let mut p_u1 = Mat8x3::zeros();
    let mut p_u2 = Mat8x3::zeros();
    for k in 0..CHAMBERS_PER_LAYER {
        p_l[(k, 0)] = -a_l;
        p_l[(k, 1)] = l_l * t_xy_l[(k, 0)];
        p_l[(k, 2)] = l_l * t_xy_l[(k, 1)];

        p_u1[(k, 0)] = b_u * t_xy_u[(k, 0)];
        p_u1[(k, 1)] = b_u * t_xy_u[(k, 1)];
        p_u1[(k, 2)] = x_u * layout.pairing[k];

        p_u2[(k, 0)] = -a_u;
        p_u2[(k, 1)] = l_u * t_xy_u[(k, 0)];
        p_u2[(k, 2)] = l_u * t_xy_u[(k, 1)];
    }

    let b_l = pinv_8x3("lower block", &p_l)?;
    let b_u2 = pinv_8x3("upper block", &p_u1)?;
    let b_u1 = -b_u2 * p_u2 * b_l;

    let mut k = Mat6x16::zeros();
    for row in 0..3 {
        for col in 0..CHAMBERS_PER_LAYER {
            k[(row, col)] = b_u1[(row, col)];
            k[(row, col + 8)] = b_u2[(row, col)];
            k[(row + 3, col)] = b_l[(row, col)];
        }
    }
    Ok(k)
}

fn pinv_8x3(name: &str, m: &Mat8x3) -> Result<SMatrix<f64, 3, 8>> {
    let sv = m.singular_values();
    let tol = sv.max() * 8.0 * f64::EPSILON;
    if sv.iter().filter(|&&s| s > tol).count() < 3 {
        return Err(Error::DegenerateLayout(format!(
            "{name} is rank deficient; cannot assemble the decoupling matrix"
        )));
    }
    m.pseudo_inverse(tol)
        .map_err(|e| Error::DegenerateLayout(format!("{name}: {e}")))
}

/// Serialized calibration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub schema_version: u32,
    pub strategy: Strategy,
    /// Row meaning of the matrix, for readers of the file.
    pub row_order: [String; 6],
    /// 6x16 matrix, row major.
    pub k_row_major: Vec<f64>,
    pub scalars: Option<[f64; 6]>,
    pub diagnostics: Diagnostics,
}

impl CalibrationFile {
    pub fn from_result(result: &CalibrationResult) -> Self {
        let row_order =
            std::array::from_fn(|slot| AXIS_NAMES[BLOCK_AXIS_ORDER[slot]].to_string());
        let mut k_row_major = Vec::with_capacity(96);
        for row in 0..6 {
            for col in 0..NUM_CHANNELS {
                k_row_major.push(result.k[(row, col)]);
            }
        }
        CalibrationFile {
            schema_version: CALIBRATION_SCHEMA_VERSION,
            strategy: result.strategy,
            row_order,
            k_row_major,
            scalars: result.scalars,
            diagnostics: result.diagnostics.clone(),
        }
    }

    pub fn into_result(self) -> Result<CalibrationResult> {
        if self.schema_version != CALIBRATION_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported calibration schema version {} (expected {})",
                self.schema_version, CALIBRATION_SCHEMA_VERSION
            )));
        }
        if self.k_row_major.len() != 96 {
            return Err(Error::Schema(format!(
                "decoupling matrix must hold 96 entries, got {}",
                self.k_row_major.len()
            )));
        }
        let k = Mat6x16::from_fn(|row, col| self.k_row_major[row * NUM_CHANNELS + col]);
        Ok(CalibrationResult {
            strategy: self.strategy,
            k,
            scalars: self.scalars,
            diagnostics: self.diagnostics,
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_file(&self, path: &std::path::Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
