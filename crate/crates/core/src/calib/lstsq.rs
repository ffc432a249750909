//! SVD-backed least squares with minimum-norm handling of rank-deficient
//! designs and an optional ridge filter.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Solution of `min ||design * x - targets||` per target column.
#[derive(Debug, Clone)]
pub struct Lstsq {
    /// Coefficients, one column per target column (ncols x nrhs).
    pub coeffs: DMatrix<f64>,
    /// Per-target residual RMS.
    pub residual_rms: Vec<f64>,
    /// Ratio of largest to smallest retained singular value.
    pub condition: f64,
    /// Number of singular values above the rank tolerance.
    pub rank: usize,
}

/// Solves the least-squares problem by SVD.
///
/// Singular values below `max(n, p) * eps * s_max` are dropped, giving the
/// minimum-norm solution on rank-deficient designs. When `ridge` is set the
/// hard cutoff is replaced by Tikhonov filtering `s / (s^2 + ridge)`.
pub fn lstsq(design: &DMatrix<f64>, targets: &DMatrix<f64>, ridge: Option<f64>) -> Result<Lstsq> {
    let n = design.nrows();
    if n == 0 || n != targets.nrows() {
        return Err(Error::MismatchedLengths {
            left: n,
            right: targets.nrows(),
        });
    }

    let svd = design.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let s = &svd.singular_values;

    let s_max = s.max();
    let tol = s_max * design.nrows().max(design.ncols()) as f64 * f64::EPSILON;
    let rank = s.iter().filter(|&&x| x > tol).count();
    if rank == 0 {
        return Err(Error::DegenerateRegression(
            "design matrix is zero".into(),
        ));
    }
    let s_min = s
        .iter()
        .filter(|&&x| x > tol)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let condition = s_max / s_min;

    let filter: Vec<f64> = s
        .iter()
        .map(|&si| match ridge {
            Some(r) if r > 0.0 => si / (si * si + r),
            _ => {
                if si > tol {
                    1.0 / si
                } else {
                    0.0
                }
            }
        })
        .collect();

    // x = V * diag(filter) * U^T * b
    let mut ut_b = u.transpose() * targets;
    for (i, f) in filter.iter().enumerate() {
        ut_b.row_mut(i).scale_mut(*f);
    }
    let coeffs = v_t.transpose() * ut_b;

    let pred = design * &coeffs;
    let residual_rms = (0..targets.ncols())
        .map(|j| {
            let ss: f64 = (0..n)
                .map(|i| {
                    let d = pred[(i, j)] - targets[(i, j)];
                    d * d
                })
                .sum();
            (ss / n as f64).sqrt()
        })
        .collect();

    Ok(Lstsq {
        coeffs,
        residual_rms,
        condition,
        rank,
    })
}
