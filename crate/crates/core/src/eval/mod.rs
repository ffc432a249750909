//! Evaluation of decoupled output against a reference: six per-axis error
//! metrics plus the static-response regression.

pub mod cycles;
pub mod metrics;

pub use cycles::{hysteresis_loop, resample_on_reference, segment_cycles, HysteresisLoop};
pub use metrics::{
    e_acc, e_dev, e_dri, e_hys, e_hys_branches, e_nlin, e_rep, static_regression,
    StaticRegression,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::log::WrenchSeries;
use crate::wrench::{Capacity, AXIS_NAMES};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Evaluation options.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Full scale per axis for drift normalization.
    pub capacity: Capacity,
    /// Points of the hysteresis resampling grid.
    pub grid_points: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            capacity: Capacity::default(),
            grid_points: 101,
        }
    }
}

/// Metrics of one axis. Metrics whose preconditions the data cannot meet
/// (no cycles, no quiet window, no excitation) are absent rather than zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisEval {
    pub axis: String,
    pub e_dev: Option<f64>,
    pub e_rep: Option<f64>,
    pub e_nlin: Option<f64>,
    pub e_hys: Option<f64>,
    /// Reported with a +- sign when formatted.
    pub e_dri: Option<f64>,
    pub e_acc: Option<f64>,
    pub static_fit: Option<StaticRegression>,
}

/// Six-axis evaluation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub axes: Vec<AxisEval>,
}

impl EvalReport {
    pub fn check_schema(&self) -> Result<()> {
        if self.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported report schema version {} (expected {})",
                self.schema_version, REPORT_SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    pub fn to_file(&self, path: &std::path::Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let report: EvalReport = serde_json::from_str(&text)?;
        report.check_schema()?;
        Ok(report)
    }

    /// The accuracy identity e_acc^2 = e_rep^2 + e_nlin^2 + e_hys^2 must
    /// hold exactly on the stored values.
    pub fn accuracy_identity_holds(&self) -> bool {
        self.axes.iter().all(|a| match (a.e_rep, a.e_nlin, a.e_hys, a.e_acc) {
            (Some(r), Some(n), Some(h), Some(acc)) => acc == e_acc(r, n, h),
            (_, _, _, None) => true,
            _ => false,
        })
    }
}

/// Evaluates a measured series against its reference, axis by axis.
///
/// Series must be sample-aligned (same length, same timestamps). Drift is
/// computed over samples where the reference is zero on **all** axes, i.e.
/// genuinely unloaded.
pub fn evaluate(meas: &WrenchSeries, reference: &WrenchSeries, options: &EvalOptions) -> Result<EvalReport> {
    if meas.wrenches.len() != reference.wrenches.len() {
        return Err(Error::MismatchedLengths {
            left: meas.wrenches.len(),
            right: reference.wrenches.len(),
        });
    }
    if meas.wrenches.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }

    let unloaded: Vec<usize> = reference
        .wrenches
        .iter()
        .enumerate()
        .filter(|(_, w)| w.to_array().iter().all(|v| *v == 0.0))
        .map(|(i, _)| i)
        .collect();

    let mut axes = Vec::with_capacity(6);
    for (axis, name) in AXIS_NAMES.iter().enumerate() {
        let m = meas.axis(axis);
        let r = reference.axis(axis);

        let e_dev = metrics::e_dev(&m, &r).ok();
        let e_rep = metrics::e_rep(&m, &r).ok();
        let e_nlin = metrics::e_nlin(&m, &r).ok();
        let e_hys = metrics::e_hys(&m, &r).ok();
        let e_acc = match (e_rep, e_nlin, e_hys) {
            (Some(rep), Some(nlin), Some(hys)) => Some(metrics::e_acc(rep, nlin, hys)),
            _ => None,
        };

        let e_dri = if unloaded.is_empty() {
            None
        } else {
            let quiet: Vec<f64> = unloaded.iter().map(|&i| m[i]).collect();
            metrics::e_dri(&quiet, options.capacity.axis_limit(axis)).ok()
        };

        // Static response over the samples where this axis is driven.
        let driven: Vec<usize> = r
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, _)| i)
            .collect();
        let static_fit = if driven.len() >= 3 {
            let md: Vec<f64> = driven.iter().map(|&i| m[i]).collect();
            let rd: Vec<f64> = driven.iter().map(|&i| r[i]).collect();
            metrics::static_regression(&md, &rd).ok()
        } else {
            None
        };

        axes.push(AxisEval {
            axis: name.to_string(),
            e_dev,
            e_rep,
            e_nlin,
            e_hys,
            e_dri,
            e_acc,
            static_fit,
        });
    }

    Ok(EvalReport {
        schema_version: REPORT_SCHEMA_VERSION,
        axes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wrench::Wrench;

    fn ramp_series(cycles: usize) -> WrenchSeries {
        let mut t = Vec::new();
        let mut wrenches = Vec::new();
        let mut k = 0usize;
        // Quiet lead-in, then identical fz ramp cycles.
        for _ in 0..32 {
            t.push(k as f64 / 1024.0);
            wrenches.push(Wrench::ZERO);
            k += 1;
        }
        for _ in 0..cycles {
            for j in 0..64 {
                let v = if j <= 32 {
                    j as f64 / 32.0
                } else {
                    (64 - j) as f64 / 32.0
                };
                t.push(k as f64 / 1024.0);
                wrenches.push(Wrench::new(0.0, 0.0, 40.0 * v, 0.0, 0.0, 0.0));
                k += 1;
            }
        }
        WrenchSeries { t, wrenches }
    }

    #[test]
    fn perfect_measurement_scores_zero_everywhere() {
        let reference = ramp_series(3);
        let report = evaluate(&reference, &reference, &EvalOptions::default()).unwrap();
        let fz = &report.axes[2];
        assert_eq!(fz.e_dev, Some(0.0));
        assert_eq!(fz.e_rep, Some(0.0));
        assert!(fz.e_nlin.unwrap() < 1e-14);
        assert!(fz.e_hys.unwrap() < 1e-14);
        assert_eq!(fz.e_dri, Some(0.0));
        assert_eq!(fz.static_fit.unwrap().slope, 1.0);
        assert!(report.accuracy_identity_holds());
    }

    #[test]
    fn undriven_axes_report_no_metrics() {
        let reference = ramp_series(2);
        let report = evaluate(&reference, &reference, &EvalOptions::default()).unwrap();
        let fx = &report.axes[0];
        assert_eq!(fx.e_dev, None);
        assert_eq!(fx.e_rep, None);
        assert_eq!(fx.static_fit, None);
        // Drift is still defined: the axis output during no-load samples.
        assert_eq!(fx.e_dri, Some(0.0));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = ramp_series(2);
        let mut b = ramp_series(2);
        b.wrenches.pop();
        b.t.pop();
        assert!(matches!(
            evaluate(&a, &b, &EvalOptions::default()),
            Err(Error::MismatchedLengths { .. })
        ));
    }

    #[test]
    fn report_json_round_trip() {
        let reference = ramp_series(2);
        let report = evaluate(&reference, &reference, &EvalOptions::default()).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: EvalReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
    }
}
