//! Per-axis error metrics of a (measured, reference) series pair.
//!
//! All metrics return fractions of the relevant scale (multiply by 100 for
//! percent). Deviation, repeatability, non-linearity and hysteresis are
//! scale-invariant; drift is normalized by the rated full scale.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::eval::cycles::{hysteresis_loop, segment_cycles};

fn check_pair(meas: &[f64], reference: &[f64]) -> Result<()> {
    if meas.len() != reference.len() {
        return Err(Error::MismatchedLengths {
            left: meas.len(),
            right: reference.len(),
        });
    }
    if meas.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    Ok(())
}

fn max_abs(series: &[f64]) -> f64 {
    series.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Deviation rate: mean absolute error over the peak reference magnitude.
pub fn e_dev(meas: &[f64], reference: &[f64]) -> Result<f64> {
    check_pair(meas, reference)?;
    let peak = max_abs(reference);
    if peak == 0.0 {
        return Err(Error::AllZeroReference);
    }
    let sum: f64 = meas
        .iter()
        .zip(reference)
        .map(|(m, r)| (m - r).abs())
        .sum();
    Ok(sum / (meas.len() as f64 * peak))
}

/// Repeatability error: half the mean absolute spread between measurements
/// of consecutive cycles at the same intra-cycle position, over the peak
/// reference magnitude.
pub fn e_rep(meas: &[f64], reference: &[f64]) -> Result<f64> {
    check_pair(meas, reference)?;
    let peak = max_abs(reference);
    if peak == 0.0 {
        return Err(Error::AllZeroReference);
    }
    let cycles = segment_cycles(reference)?;
    if cycles.len() < 2 {
        return Err(Error::TooFewCycles {
            needed: 2,
            got: cycles.len(),
        });
    }
    let mut total = 0.0;
    for pair in cycles.windows(2) {
        let a = &meas[pair[0].clone()];
        let b = &meas[pair[1].clone()];
        let n = a.len().min(b.len());
        let sum: f64 = (0..n).map(|j| (a[j] - b[j]).abs()).sum();
        total += sum / (2.0 * n as f64 * peak);
    }
    Ok(total / (cycles.len() - 1) as f64)
}

/// Non-linearity: mean absolute residual of the best-fit line, over the
/// peak magnitude of that line.
pub fn e_nlin(meas: &[f64], reference: &[f64]) -> Result<f64> {
    check_pair(meas, reference)?;
    let n = meas.len() as f64;
    let mean_r: f64 = reference.iter().sum::<f64>() / n;
    let mean_m: f64 = meas.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (m, r) in meas.iter().zip(reference) {
        sxx += (r - mean_r) * (r - mean_r);
        sxy += (r - mean_r) * (m - mean_m);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression(
            "reference is constant; the best-fit line is undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_m - slope * mean_r;
    let fit: Vec<f64> = reference.iter().map(|r| slope * r + intercept).collect();
    let peak = max_abs(&fit);
    if peak == 0.0 {
        return Err(Error::DegenerateRegression(
            "fitted line is identically zero".into(),
        ));
    }
    let sum: f64 = meas.iter().zip(&fit).map(|(m, f)| (m - f).abs()).sum();
    Ok(sum / (n * peak))
}

/// Maximum hysteresis given branches already aligned on a common
/// reference grid: half the largest branch gap over the peak measurement.
pub fn e_hys_branches(loading: &[f64], unloading: &[f64]) -> Result<f64> {
    if loading.len() != unloading.len() {
        return Err(Error::MismatchedLengths {
            left: loading.len(),
            right: unloading.len(),
        });
    }
    if loading.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let peak = max_abs(loading).max(max_abs(unloading));
    if peak == 0.0 {
        return Ok(0.0);
    }
    let gap = loading
        .iter()
        .zip(unloading)
        .map(|(l, u)| (l - u).abs())
        .fold(0.0_f64, f64::max);
    Ok(0.5 * gap / peak)
}

/// Maximum hysteresis of a full series: splits cycles into branches,
/// resamples them onto a shared reference grid and applies
/// [`e_hys_branches`], normalizing by the peak of the whole measurement.
pub fn e_hys(meas: &[f64], reference: &[f64]) -> Result<f64> {
    check_pair(meas, reference)?;
    let loop_ = hysteresis_loop(meas, reference, 101)?;
    let peak = max_abs(meas);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let gap = loop_
        .loading
        .iter()
        .zip(&loop_.unloading)
        .map(|(l, u)| (l - u).abs())
        .fold(0.0_f64, f64::max);
    Ok(0.5 * gap / peak)
}

/// Drift: mean absolute unloaded output over the rated full scale.
pub fn e_dri(unloaded_meas: &[f64], full_scale: f64) -> Result<f64> {
    if unloaded_meas.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mean: f64 =
        unloaded_meas.iter().map(|m| m.abs()).sum::<f64>() / unloaded_meas.len() as f64;
    Ok(mean / full_scale)
}

/// Accuracy: root sum of squares of repeatability, non-linearity and
/// hysteresis.
pub fn e_acc(rep: f64, nlin: f64, hys: f64) -> f64 {
    (rep * rep + nlin * nlin + hys * hys).sqrt()
}

/// Zero-intercept regression of measurement on reference.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StaticRegression {
    /// Slope of y = slope * x through the origin.
    pub slope: f64,
    /// Half-width of the 95% confidence interval of the slope.
    pub ci_half_width: f64,
    /// Coefficient of determination against the zero-intercept model
    /// (uncentered total sum of squares).
    pub r_squared: f64,
    pub samples: usize,
}

/// Fits y = slope * x by least squares through the origin.
pub fn static_regression(meas: &[f64], reference: &[f64]) -> Result<StaticRegression> {
    check_pair(meas, reference)?;
    let n = meas.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let sxx: f64 = reference.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression(
            "reference has no energy; zero-intercept slope undefined".into(),
        ));
    }
    let sxy: f64 = reference.iter().zip(meas).map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;

    let ss_res: f64 = reference
        .iter()
        .zip(meas)
        .map(|(x, y)| {
            let e = y - slope * x;
            e * e
        })
        .sum();
    let ss_tot: f64 = meas.iter().map(|y| y * y).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };

    let dof = (n - 1) as f64;
    let sigma2 = ss_res / dof;
    let se = (sigma2 / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::DegenerateRegression(e.to_string()))?
        .inverse_cdf(0.975);

    Ok(StaticRegression {
        slope,
        ci_half_width: t * se,
        r_squared,
        samples: n,
    })
}
