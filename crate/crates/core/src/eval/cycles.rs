//! Cycle segmentation and loading/unloading branch extraction.
//!
//! Upload-download experiments return to zero reference force between
//! cycles; a cycle is a maximal run of samples where the reference is
//! nonzero. Branches split at the reference apex and are resampled onto a
//! common reference-force grid for hysteresis evaluation.

use std::ops::Range;

use crate::error::{Error, Result};

/// Maximal runs where |reference| exceeds a relative threshold.
pub fn segment_cycles(reference: &[f64]) -> Result<Vec<Range<usize>>> {
    let max = reference.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::AllZeroReference);
    }
    let thr = 1e-9 * max;
    let mut cycles = Vec::new();
    let mut start: Option<usize> = None;
    for (i, v) in reference.iter().enumerate() {
        let active = v.abs() > thr;
        match (start, active) {
            (None, true) => start = Some(i),
            (Some(s), false) => {
                cycles.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        cycles.push(s..reference.len());
    }
    Ok(cycles)
}

/// Splits one cycle at the reference apex: loading = start..=apex,
/// unloading = apex..end (the apex belongs to both).
pub fn split_at_apex(reference: &[f64]) -> (Range<usize>, Range<usize>) {
    let mut apex = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, v) in reference.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            apex = i;
        }
    }
    (0..apex + 1, apex..reference.len())
}

/// Measurement resampled onto `grid` points of the reference by linear
/// interpolation; the (reference, measurement) pairs are sorted by
/// reference first, so either branch direction works.
pub fn resample_on_reference(reference: &[f64], meas: &[f64], grid: &[f64]) -> Vec<f64> {
    let mut pairs: Vec<(f64, f64)> = reference
        .iter()
        .copied()
        .zip(meas.iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    grid.iter()
        .map(|&g| {
            match pairs.binary_search_by(|p| p.0.partial_cmp(&g).unwrap()) {
                Ok(i) => pairs[i].1,
                Err(0) => pairs[0].1,
                Err(i) if i >= pairs.len() => pairs[pairs.len() - 1].1,
                Err(i) => {
                    let (x0, y0) = pairs[i - 1];
                    let (x1, y1) = pairs[i];
                    if x1 == x0 {
                        0.5 * (y0 + y1)
                    } else {
                        y0 + (y1 - y0) * (g - x0) / (x1 - x0)
                    }
                }
            }
        })
        .collect()
}

/// Loading and unloading measurement curves on a shared reference grid,
/// averaged across all cycles of the series.
#[derive(Debug, Clone, PartialEq)]
pub struct HysteresisLoop {
    /// Reference-force grid.
    pub grid: Vec<f64>,
    /// Mean measurement along the loading branches.
    pub loading: Vec<f64>,
    /// Mean measurement along the unloading branches.
    pub unloading: Vec<f64>,
}

/// Extracts the averaged hysteresis loop of `meas` against `reference`.
pub fn hysteresis_loop(meas: &[f64], reference: &[f64], grid_points: usize) -> Result<HysteresisLoop> {
    if meas.len() != reference.len() {
        return Err(Error::MismatchedLengths {
            left: meas.len(),
            right: reference.len(),
        });
    }
    let cycles = segment_cycles(reference)?;
    if cycles.is_empty() {
        return Err(Error::TooFewCycles { needed: 1, got: 0 });
    }

    struct Branch {
        lo: f64,
        hi: f64,
        refs: Vec<f64>,
        meas: Vec<f64>,
    }
    let mut loading = Vec::new();
    let mut unloading = Vec::new();
    for cycle in &cycles {
        let r = &reference[cycle.clone()];
        let m = &meas[cycle.clone()];
        let (up, down) = split_at_apex(r);
        for (branch, store) in [(up, &mut loading), (down, &mut unloading)] {
            if branch.len() < 2 {
                continue;
            }
            let refs = r[branch.clone()].to_vec();
            let lo = refs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = refs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            store.push(Branch {
                lo,
                hi,
                meas: m[branch].to_vec(),
                refs,
            });
        }
    }
    if loading.is_empty() || unloading.is_empty() {
        return Err(Error::TooFewCycles { needed: 1, got: 0 });
    }

    let lo = loading
        .iter()
        .chain(unloading.iter())
        .map(|b| b.lo)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = loading
        .iter()
        .chain(unloading.iter())
        .map(|b| b.hi)
        .fold(f64::INFINITY, f64::min);
    let overlapping = hi > lo;
    if !overlapping {
        return Err(Error::NonOverlappingBranches);
    }

    let grid: Vec<f64> = (0..grid_points)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_points - 1) as f64)
        .collect();
    let average = |branches: &[Branch]| -> Vec<f64> {
        let mut acc = vec![0.0; grid.len()];
        for b in branches {
            let curve = resample_on_reference(&b.refs, &b.meas, &grid);
            for (a, v) in acc.iter_mut().zip(curve.iter()) {
                *a += v;
            }
        }
        acc.iter().map(|a| a / branches.len() as f64).collect()
    };

    Ok(HysteresisLoop {
        loading: average(&loading),
        unloading: average(&unloading),
        grid,
    })
}
