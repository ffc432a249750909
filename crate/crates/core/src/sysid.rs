//! First-order transfer-function identification and Bode data.
//!
//! Fits G(s) = gain / (tau*s + 1) to a (input, output) series pair by
//! output error: for each candidate tau the input is pushed through the
//! same discrete lag the simulator uses, the gain follows in closed form,
//! and tau is found by coarse grid search plus golden-section refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::imperfection::apply_dynamics;

pub const TRANSFER_SCHEMA_VERSION: u32 = 1;

/// Identified first-order model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderFit {
    pub gain: f64,
    pub tau_s: f64,
    /// RMS of the output-error residual.
    pub fit_rms: f64,
}

/// One point of a Bode diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodePoint {
    pub freq_hz: f64,
    pub magnitude_db: f64,
    pub phase_deg: f64,
}

/// Per-axis transfer functions identified on the prototype hardware,
/// canonical axis order (Fx, Fy, Fz, Tx, Ty, Tz).
pub const PROTOTYPE_TRANSFER_FUNCTIONS: [(f64, f64); 6] = [
    (0.9879, 0.0036),
    (0.9761, 0.0038),
    (0.9815, 0.0018),
    (1.007, 0.0033),
    (0.9899, 0.0026),
    (0.9488, 0.0049),
];

/// Search ceiling for the time constant, s.
const TAU_MAX_S: f64 = 1.0;
/// Convergence tolerance on tau, s.
const TAU_TOL_S: f64 = 1e-6;

/// Fits gain and time constant of a first-order lag between `input` and
/// `output` sampled at fixed step `dt`.
pub fn fit_first_order(input: &[f64], output: &[f64], dt: f64) -> Result<FirstOrderFit> {
    if input.len() != output.len() {
        return Err(Error::MismatchedLengths {
            left: input.len(),
            right: output.len(),
        });
    }
    if input.len() < 4 {
        return Err(Error::TooFewSamples {
            needed: 4,
            got: input.len(),
        });
    }
    let dt_ok = dt > 0.0;
    if !dt_ok {
        return Err(Error::Schema(format!("sample step must be positive, got {dt}")));
    }
    for (i, v) in input.iter().chain(output.iter()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteSample {
                index: i % input.len(),
            });
        }
    }
    let lo = input.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi = input.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let moves = hi > lo;
    if !moves {
        return Err(Error::ConstantInput);
    }

    let cost = |tau: f64| -> (f64, f64) {
        let z = apply_dynamics(input, tau, dt);
        let szz: f64 = z.iter().map(|v| v * v).sum();
        if szz == 0.0 {
            return (f64::INFINITY, 0.0);
        }
        let szy: f64 = z.iter().zip(output).map(|(a, b)| a * b).sum();
        let gain = szy / szz;
        let ss: f64 = z
            .iter()
            .zip(output)
            .map(|(a, b)| {
                let e = gain * a - b;
                e * e
            })
            .sum();
        ((ss / input.len() as f64).sqrt(), gain)
    };

    // Coarse bracket: zero plus a log-spaced sweep.
    let mut grid = vec![0.0];
    let points = 49;
    for i in 0..=points {
        let exp = -5.0 + 5.0 * i as f64 / points as f64;
        grid.push(TAU_MAX_S * 10.0_f64.powf(exp));
    }
    let mut best_idx = 0;
    let mut best = f64::INFINITY;
    for (i, &tau) in grid.iter().enumerate() {
        let (rms, _) = cost(tau);
        if rms < best {
            best = rms;
            best_idx = i;
        }
    }

    // Golden-section refinement inside the bracketing neighbours.
    let mut a = if best_idx == 0 { 0.0 } else { grid[best_idx - 1] };
    let mut b = if best_idx + 1 < grid.len() {
        grid[best_idx + 1]
    } else {
        TAU_MAX_S
    };
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = cost(x1).0;
    let mut f2 = cost(x2).0;
    while b - a > TAU_TOL_S {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = cost(x1).0;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = cost(x2).0;
        }
    }
    // The optimum may sit on a bracket endpoint (tau = 0 in particular);
    // keep whichever candidate scores best.
    let mut tau = 0.5 * (a + b);
    let (mut fit_rms, mut gain) = cost(tau);
    for candidate in [a, b, grid[best_idx]] {
        let (rms, g) = cost(candidate);
        if rms < fit_rms {
            tau = candidate;
            fit_rms = rms;
            gain = g;
        }
    }

    Ok(FirstOrderFit {
        gain,
        tau_s: tau,
        fit_rms,
    })
}

/// Bode magnitude/phase of gain / (tau*s + 1) at the given frequencies.
pub fn bode_points(gain: f64, tau_s: f64, freqs_hz: &[f64]) -> Vec<BodePoint> {
    freqs_hz
        .iter()
        .map(|&f| {
            let wt = std::f64::consts::TAU * f * tau_s;
            BodePoint {
                freq_hz: f,
                magnitude_db: 20.0 * (gain / (1.0 + wt * wt).sqrt()).log10(),
                phase_deg: -wt.atan().to_degrees(),
            }
        })
        .collect()
}

/// Log-spaced frequency grid, Hz.
pub fn log_frequency_grid(min_hz: f64, max_hz: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = (min_hz.log10(), max_hz.log10());
    (0..points)
        .map(|i| 10.0_f64.powf(lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_walk(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut level = 0.0;
        (0..n)
            .map(|_| {
                level += rng.random_range(-0.5..0.5);
                level
            })
            .collect()
    }

    #[test]
    fn identity_system_fits_unit_gain_and_zero_tau() {
        let x = random_walk(4096, 5);
        let fit = fit_first_order(&x, &x, 1.0 / 1024.0).unwrap();
        assert_relative_eq!(fit.gain, 1.0, max_relative = 1e-9);
        assert!(fit.tau_s < 2e-6, "tau {} should be ~0", fit.tau_s);
        assert!(fit.fit_rms < 1e-9);
    }

    #[test]
    fn synthetic_lag_round_trips_within_one_percent() {
        let dt = 1.0 / 1024.0;
        let x = random_walk(10240, 17);
        let z = apply_dynamics(&x, 0.0034, dt);
        let y: Vec<f64> = z.iter().map(|v| 0.99 * v).collect();
        let fit = fit_first_order(&x, &y, dt).unwrap();
        assert_relative_eq!(fit.gain, 0.99, max_relative = 0.01);
        assert_relative_eq!(fit.tau_s, 0.0034, max_relative = 0.01);
    }

    #[test]
    fn round_trip_holds_across_the_working_tau_range() {
        // 5 s at 1024 Hz, unit gain, tau swept over [0.001, 0.01] s.
        let dt = 1.0 / 1024.0;
        let x = random_walk(5120, 23);
        for tau in [0.001, 0.002, 0.0034, 0.005, 0.0075, 0.01] {
            let y = apply_dynamics(&x, tau, dt);
            let fit = fit_first_order(&x, &y, dt).unwrap();
            assert_relative_eq!(fit.gain, 1.0, max_relative = 0.01);
            assert_relative_eq!(fit.tau_s, tau, max_relative = 0.01);
        }
    }

    #[test]
    fn constant_input_is_rejected() {
        let x = vec![2.5; 128];
        let y = vec![2.5; 128];
        assert!(matches!(
            fit_first_order(&x, &y, 1.0 / 1024.0),
            Err(Error::ConstantInput)
        ));
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let mut x = random_walk(64, 3);
        x[10] = f64::NAN;
        let y = random_walk(64, 4);
        assert!(matches!(
            fit_first_order(&x, &y, 1.0 / 1024.0),
            Err(Error::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn bode_dc_limit_is_gain() {
        let pts = bode_points(0.9815, 0.0018, &[1e-6]);
        assert_relative_eq!(pts[0].magnitude_db, 20.0 * 0.9815_f64.log10(), epsilon = 1e-6);
        assert!(pts[0].phase_deg.abs() < 1e-3);
    }

    #[test]
    fn bode_corner_frequency_drops_3db_at_minus_45_degrees() {
        let tau = 0.0034;
        let corner = 1.0 / (std::f64::consts::TAU * tau);
        let pts = bode_points(1.0, tau, &[corner]);
        assert_relative_eq!(pts[0].magnitude_db, -3.0102999566398125, max_relative = 1e-9);
        assert_relative_eq!(pts[0].phase_deg, -45.0, max_relative = 1e-9);
    }

    #[test]
    fn bode_magnitude_is_monotone_in_frequency() {
        let freqs = log_frequency_grid(0.01, 200.0, 120);
        let pts = bode_points(1.007, 0.0033, &freqs);
        for pair in pts.windows(2) {
            assert!(pair[1].magnitude_db <= pair[0].magnitude_db);
        }
    }

    #[test]
    fn prototype_constants_average_to_the_reported_mean() {
        // The reported average time constant is 0.0034 s; the tabulated
        // constants average to 0.003333, within one rounding unit.
        let mean: f64 =
            PROTOTYPE_TRANSFER_FUNCTIONS.iter().map(|(_, tau)| tau).sum::<f64>() / 6.0;
        assert!((mean - 0.0034).abs() < 1e-4, "mean tau {mean}");
    }

    #[test]
    fn corner_frequencies_sit_above_the_working_band() {
        // All identified channels stay flat below 10 Hz: corners > 30 Hz.
        for (_, tau) in PROTOTYPE_TRANSFER_FUNCTIONS {
            let corner = 1.0 / (std::f64::consts::TAU * tau);
            assert!(corner > 30.0, "corner {corner} Hz");
        }
    }
}
