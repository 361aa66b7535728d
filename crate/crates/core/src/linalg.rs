use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::SINGULAR_TOL;

/// Smallest and largest singular value.
pub(crate) fn singular_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (if min.is_finite() { min } else { 0.0 }, max)
}

/// `σ_min / max(σ_max, MIN_POSITIVE)`.
pub(crate) fn relative_smallest_sv(smin: f64, smax: f64) -> f64 {
    smin / smax.max(f64::MIN_POSITIVE)
}

/// Number of singular values above `SINGULAR_TOL · σ_max`.
pub(crate) fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > SINGULAR_TOL * max).count()
}

/// Solves `A x = b` by column-pivoted QR after the singular-value screen.
pub(crate) fn solve_checked(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (smin, smax) = singular_extremes(a);
    let ratio = relative_smallest_sv(smin, smax);
    if !(ratio > SINGULAR_TOL) {
        return Err(Error::Singular { ratio });
    }
    let x = a
        .clone()
        .col_piv_qr()
        .solve(b)
        .ok_or(Error::Singular { ratio })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("linear solve".into()));
    }
    Ok(x)
}

/// Row and column scale factors that bring every row and column of `a` to
/// unit max-norm (columns first, then rows). Returns `(row, col)` so that
/// `diag(row) · a · diag(col)` is the equilibrated matrix.
pub(crate) fn equilibrate(a: &DMatrix<f64>) -> (DVector<f64>, DVector<f64>) {
    let (nr, nc) = a.shape();
    let mut col = DVector::from_element(nc, 1.0);
    for j in 0..nc {
        let m = a.column(j).amax();
        if m > 0.0 {
            col[j] = 1.0 / m;
        }
    }
    let scaled = a * DMatrix::from_diagonal(&col);
    let mut row = DVector::from_element(nr, 1.0);
    for i in 0..nr {
        let m = scaled.row(i).amax();
        if m > 0.0 {
            row[i] = 1.0 / m;
        }
    }
    (row, col)
}

pub(crate) fn apply_scaling(a: &DMatrix<f64>, row: &DVector<f64>, col: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| row[i] * a[(i, j)] * col[j])
}
