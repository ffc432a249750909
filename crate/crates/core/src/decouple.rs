//! Streaming pressure-to-wrench runtime.
//!
//! A `Decoupler` owns a decoupling matrix and a tare baseline. Taring
//! mutates; decoupling afterwards is read-only and callable concurrently.
//! Stream processing preserves input order and rejects rows with
//! non-finite channels instead of interpolating.

use crate::calib::CalibrationResult;
use crate::error::{Error, Result};
use crate::sim::log::{SimLog, WrenchSeries};
use crate::wrench::Wrench;
use crate::{Mat6x16, NUM_CHANNELS};

/// Pressure-to-wrench converter at sensor rate.
#[derive(Debug, Clone)]
pub struct Decoupler {
    /// Row-major copy of the matrix (block row order) for the hot loop.
    k: [[f64; NUM_CHANNELS]; 6],
    baseline: Option<[f64; NUM_CHANNELS]>,
    /// Optional moving-average window on the output, samples. Off (None)
    /// unless configured.
    smoothing_window: Option<usize>,
}

/// Result of a stream run: decoupled series plus rejected row indices.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamOutcome {
    pub series: WrenchSeries,
    /// Zero-based indices of rows dropped for non-finite channels.
    pub rejected_rows: Vec<usize>,
}

impl Decoupler {
    pub fn new(calibration: &CalibrationResult) -> Self {
        Self::from_matrix(&calibration.k)
    }

    pub fn from_matrix(k: &Mat6x16) -> Self {
        let rows = std::array::from_fn(|r| std::array::from_fn(|c| k[(r, c)]));
        Decoupler {
            k: rows,
            baseline: None,
            smoothing_window: None,
        }
    }

    /// Enables a trailing moving average of `window` samples on stream
    /// output. `window <= 1` disables.
    pub fn with_smoothing(mut self, window: usize) -> Self {
        self.smoothing_window = if window > 1 { Some(window) } else { None };
        self
    }

    /// Estimates the no-load baseline as the per-channel mean of `rows`.
    pub fn tare(&mut self, rows: &[[f64; NUM_CHANNELS]]) -> Result<[f64; NUM_CHANNELS]> {
        if rows.is_empty() {
            return Err(Error::EmptyTareWindow);
        }
        let mut mean = [0.0; NUM_CHANNELS];
        for row in rows {
            for (m, v) in mean.iter_mut().zip(row.iter()) {
                *m += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= rows.len() as f64;
        }
        self.baseline = Some(mean);
        Ok(mean)
    }

    pub fn set_baseline(&mut self, baseline: [f64; NUM_CHANNELS]) {
        self.baseline = Some(baseline);
    }

    pub fn baseline(&self) -> Option<&[f64; NUM_CHANNELS]> {
        self.baseline.as_ref()
    }

    /// Converts one pressure sample to a wrench. Stateless per sample.
    pub fn decouple(&self, p_abs: &[f64; NUM_CHANNELS]) -> Result<Wrench> {
        let baseline = self.baseline.ok_or(Error::NotTared)?;
        let mut block = [0.0; 6];
        for (slot, row) in self.k.iter().enumerate() {
            let mut acc = 0.0;
            for c in 0..NUM_CHANNELS {
                acc += row[c] * (p_abs[c] - baseline[c]);
            }
            block[slot] = acc;
        }
        Ok(Wrench::from_block_order(block))
    }

    /// Decouples a whole log in input order. Rows containing non-finite
    /// channels are rejected (reported by index) and the stream continues.
    pub fn decouple_stream(&self, log: &SimLog) -> Result<StreamOutcome> {
        if self.baseline.is_none() {
            return Err(Error::NotTared);
        }
        let mut series = WrenchSeries::default();
        let mut rejected_rows = Vec::new();
        for (i, row) in log.rows.iter().enumerate() {
            if row.pressures.iter().any(|v| !v.is_finite()) {
                rejected_rows.push(i);
                continue;
            }
            let w = self.decouple(&row.pressures)?;
            series.t.push(row.t);
            series.wrenches.push(w);
        }
        if let Some(window) = self.smoothing_window {
            smooth_in_place(&mut series, window);
        }
        Ok(StreamOutcome {
            series,
            rejected_rows,
        })
    }

    /// Tares on the leading `window_s` seconds of the log, then decouples it.
    pub fn tare_and_stream(&mut self, log: &SimLog, window_s: f64) -> Result<StreamOutcome> {
        if log.rows.is_empty() {
            return Err(Error::EmptyTareWindow);
        }
        let t_end = log.rows[0].t + window_s;
        let window: Vec<[f64; NUM_CHANNELS]> = log
            .rows
            .iter()
            .take_while(|r| r.t < t_end)
            .map(|r| r.pressures)
            .collect();
        self.tare(&window)?;
        self.decouple_stream(log)
    }
}

/// Trailing moving average per axis.
fn smooth_in_place(series: &mut WrenchSeries, window: usize) {
    let n = series.wrenches.len();
    let mut out = Vec::with_capacity(n);
    let mut sum = [0.0; 6];
    let mut buf: std::collections::VecDeque<[f64; 6]> = std::collections::VecDeque::new();
    for w in &series.wrenches {
        let c = w.to_array();
        buf.push_back(c);
        for (s, v) in sum.iter_mut().zip(c.iter()) {
            *s += v;
        }
        if buf.len() > window {
            let old = buf.pop_front().unwrap();
            for (s, v) in sum.iter_mut().zip(old.iter()) {
                *s -= v;
            }
        }
        let len = buf.len() as f64;
        out.push(Wrench::from_array(std::array::from_fn(|i| sum[i] / len)));
    }
    series.wrenches = out;
}
