//! Polyharmonic functions `Δ^N u = 0` on the unit disk.
//!
//! Every smooth-at-origin solution expands as
//! `u(r, θ) = Σ_m Σ_{k<N} a_{m,k} r^{|m|+2k} e^{imθ}`, so the Dirichlet
//! problem with normal-derivative data on a circle `r = ρ`, and interpolation
//! on `N` concentric circles, decouple into one `N × N` system per Fourier
//! mode. Within the retained modes both problems are solved exactly.
//!
//! Per-mode systems are equilibrated (unit max-norm columns, then rows)
//! before factorization; the uniqueness certificate reports the relative
//! smallest singular value of the equilibrated matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{apply_scaling, equilibrate, relative_smallest_sv, singular_extremes, solve_checked};
use crate::system::falling_factorial;
use crate::SINGULAR_TOL;

pub const MAX_ORDER: usize = 6;
pub const MAX_MODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskConfig {
    order_n: usize,
    mode_cutoff: usize,
    radius: f64,
}

impl DiskConfig {
    pub fn new(order_n: usize, mode_cutoff: usize, radius: f64) -> Result<Self> {
        check_order(order_n)?;
        check_cutoff(mode_cutoff)?;
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidParameters(format!("radius must lie in (0, 1], got {radius}")));
        }
        Ok(Self { order_n, mode_cutoff, radius })
    }

    pub fn order_n(&self) -> usize {
        self.order_n
    }

    pub fn mode_cutoff(&self) -> usize {
        self.mode_cutoff
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidParameters(format!("order N must be in 1..={MAX_ORDER}, got {n}")));
    }
    Ok(())
}

fn check_cutoff(m: usize) -> Result<()> {
    if m > MAX_MODES {
        return Err(Error::InvalidParameters(format!("mode cutoff must be ≤ {MAX_MODES}, got {m}")));
    }
    Ok(())
}

/// Complex Fourier coefficients of boundary data, one row per condition
/// (derivative order, or circle), modes `-M..=M` stored at `m + M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBoundaryData {
    cutoff: usize,
    rows: Vec<Vec<Complex64>>,
}

impl FourierBoundaryData {
    pub fn new(cutoff: usize, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        check_cutoff(cutoff)?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != 2 * cutoff + 1) {
            return Err(Error::InvalidData(format!(
                "every row needs 2M + 1 = {} mode coefficients",
                2 * cutoff + 1
            )));
        }
        if rows.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidData("non-finite Fourier coefficient".into()));
        }
        Ok(Self { cutoff, rows })
    }

    /// All-zero data with `rows` conditions.
    pub fn zeros(rows: usize, cutoff: usize) -> Result<Self> {
        Self::new(cutoff, vec![vec![Complex64::new(0.0, 0.0); 2 * cutoff + 1]; rows])
    }

    /// Real data `a_0 + Σ_{m≥1} (a_m cos mθ + b_m sin mθ)` per row, with
    /// `cos[m]` and `sin[m]` for `m = 0..=M` (`sin[0]` is ignored).
    pub fn from_real(cos: &[Vec<f64>], sin: &[Vec<f64>]) -> Result<Self> {
        if cos.len() != sin.len() || cos.is_empty() {
            return Err(Error::InvalidData("cos and sin tables need the same number of rows".into()));
        }
        let cutoff = cos[0].len().saturating_sub(1);
        let mut rows = Vec::with_capacity(cos.len());
        for (c, s) in cos.iter().zip(sin) {
            if c.len() != cutoff + 1 || s.len() != cutoff + 1 {
                return Err(Error::InvalidData("cos/sin rows must all have M + 1 entries".into()));
            }
            let mut row = vec![Complex64::new(0.0, 0.0); 2 * cutoff + 1];
            row[cutoff] = Complex64::new(c[0], 0.0);
            for m in 1..=cutoff {
                row[cutoff + m] = Complex64::new(0.5 * c[m], -0.5 * s[m]);
                row[cutoff - m] = Complex64::new(0.5 * c[m], 0.5 * s[m]);
            }
            rows.push(row);
        }
        Self::new(cutoff, rows)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn coefficient(&self, row: usize, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        self.rows[row][(m + self.cutoff as i64) as usize]
    }

    /// `c_{j,-m} = conj(c_{j,m})` for every row and mode.
    pub fn is_real(&self, tol: f64) -> bool {
        self.rows.iter().all(|row| {
            (0..=self.cutoff).all(|m| {
                (row[self.cutoff + m] - row[self.cutoff - m].conj()).norm() <= tol
            })
        })
    }

    /// Re-expresses the data with cutoff `m_cut`; fails if a nonzero
    /// coefficient would be dropped.
    fn with_cutoff(&self, m_cut: usize) -> Result<Self> {
        if m_cut >= self.cutoff {
            let pad = m_cut - self.cutoff;
            let zero = Complex64::new(0.0, 0.0);
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    let mut out = vec![zero; pad];
                    out.extend_from_slice(r);
                    out.extend(std::iter::repeat(zero).take(pad));
                    out
                })
                .collect();
            return Self::new(m_cut, rows);
        }
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                let m = i as i64 - self.cutoff as i64;
                if m.unsigned_abs() as usize > m_cut && c.norm() != 0.0 {
                    return Err(Error::InvalidData(format!(
                        "data has a nonzero coefficient at mode {m}, beyond the cutoff {m_cut}"
                    )));
                }
            }
        }
        let lo = self.cutoff - m_cut;
        let rows = self.rows.iter().map(|r| r[lo..lo + 2 * m_cut + 1].to_vec()).collect();
        Self::new(m_cut, rows)
    }
}

/// `a_{m,k}`: coefficient of `r^{|m|+2k} e^{imθ}`, modes `-M..=M` stored
/// at `m + M`, layers `k = 0..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmansiCoefficients {
    order_n: usize,
    cutoff: usize,
    coeffs: Vec<Vec<Complex64>>,
}

impl AlmansiCoefficients {
    pub fn new(order_n: usize, cutoff: usize, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        check_order(order_n)?;
        check_cutoff(cutoff)?;
        if coeffs.len() != 2 * cutoff + 1 || coeffs.iter().any(|c| c.len() != order_n) {
            return Err(Error::InvalidData("coefficient table must be (2M+1) × N".into()));
        }
        if coeffs.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidData("non-finite coefficient".into()));
        }
        Ok(Self { order_n, cutoff, coeffs })
    }

    /// Single term `value · r^{|m|+2k} e^{imθ}`.
    pub fn monomial(order_n: usize, cutoff: usize, m: i64, k: usize, value: Complex64) -> Result<Self> {
        let mut c = vec![vec![Complex64::new(0.0, 0.0); order_n]; 2 * cutoff + 1];
        if m.unsigned_abs() as usize > cutoff || k >= order_n {
            return Err(Error::InvalidParameters(format!("term (m={m}, k={k}) outside the table")));
        }
        c[(m + cutoff as i64) as usize][k] = value;
        Self::new(order_n, cutoff, c)
    }

    pub fn order_n(&self) -> usize {
        self.order_n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn get(&self, m: i64, k: usize) -> Complex64 {
        self.coeffs[(m + self.cutoff as i64) as usize][k]
    }

    pub fn table(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().fold(0.0, |m, c| m.max(c.norm()))
    }

    fn modes(&self) -> impl Iterator<Item = i64> {
        let m = self.cutoff as i64;
        -m..=m
    }
}

fn zero_table(order_n: usize, cutoff: usize) -> Vec<Vec<Complex64>> {
    vec![vec![Complex64::new(0.0, 0.0); order_n]; 2 * cutoff + 1]
}

/// `d^j/dr^j r^p` at `r`.
fn radial_power_derivative(p: usize, j: usize, r: f64) -> f64 {
    if j > p {
        return 0.0;
    }
    falling_factorial(p as f64, j) * r.powi((p - j) as i32)
}

/// Rows `j` (derivative order), columns `k` (layer):
/// `d^j/dr^j r^{|m|+2k}` at `r = ρ`.
pub fn dirichlet_mode_matrix(order_n: usize, m: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(order_n, order_n, |j, k| radial_power_derivative(m + 2 * k, j, rho))
}

/// Rows `k` (layer function `t^{|m|+2k}`), columns `j` (radius `R_j`), the
/// same layout as a collocation matrix of the Müntz system
/// `{t^{|m|}, t^{|m|+2}, …}` at knots `R_1 < … < R_N`.
pub fn concentric_mode_matrix(m: usize, radii: &[f64]) -> DMatrix<f64> {
    let n = radii.len();
    DMatrix::from_fn(n, n, |k, j| radii[j].powi((m + 2 * k) as i32))
}

/// Solves the equilibrated complex system `A x = b` (real `A`).
fn solve_mode(a: &DMatrix<f64>, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let (row, col) = equilibrate(a);
    let scaled = apply_scaling(a, &row, &col);
    let re = DVector::from_iterator(b.len(), b.iter().enumerate().map(|(i, c)| row[i] * c.re));
    let im = DVector::from_iterator(b.len(), b.iter().enumerate().map(|(i, c)| row[i] * c.im));
    let xr = solve_checked(&scaled, &re)?;
    let xi = if im.iter().all(|v| *v == 0.0) { DVector::zeros(b.len()) } else { solve_checked(&scaled, &im)? };
    Ok((0..b.len()).map(|k| Complex64::new(col[k] * xr[k], col[k] * xi[k])).collect())
}

/// Polyharmonic `u` with `∂^j u / ∂r^j = c_j` on `r = ρ`, `j < N`, for
/// every retained mode.
pub fn solve_dirichlet_disk(cfg: &DiskConfig, data: &FourierBoundaryData) -> Result<AlmansiCoefficients> {
    let n = cfg.order_n;
    if data.rows.len() != n {
        return Err(Error::InvalidData(format!(
            "Dirichlet data for N = {n} needs {n} derivative rows, got {}",
            data.rows.len()
        )));
    }
    let data = data.with_cutoff(cfg.mode_cutoff)?;
    let cutoff = cfg.mode_cutoff;
    let mut coeffs = zero_table(n, cutoff);
    for (idx, m) in (-(cutoff as i64)..=cutoff as i64).enumerate() {
        let a = dirichlet_mode_matrix(n, m.unsigned_abs() as usize, cfg.radius);
        let b: Vec<Complex64> = (0..n).map(|j| data.rows[j][idx]).collect();
        coeffs[idx] = solve_mode(&a, &b)?;
    }
    AlmansiCoefficients::new(n, cutoff, coeffs)
}

fn check_radii(radii: &[f64]) -> Result<()> {
    check_order(radii.len())?;
    if radii.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::InvalidParameters("radii must lie in (0, 1]".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("radii must be strictly increasing (coincident radii)".into()));
    }
    Ok(())
}

/// Polyharmonic `u` of order `N = radii.len()` with `u = f_j` on the
/// circle `r = R_j`, for every retained mode.
pub fn solve_concentric(radii: &[f64], data: &FourierBoundaryData) -> Result<AlmansiCoefficients> {
    check_radii(radii)?;
    let n = radii.len();
    if data.rows.len() != n {
        return Err(Error::InvalidData(format!(
            "{n} circles need {n} data rows, got {}",
            data.rows.len()
        )));
    }
    let cutoff = data.cutoff;
    let mut coeffs = zero_table(n, cutoff);
    for (idx, m) in (-(cutoff as i64)..=cutoff as i64).enumerate() {
        let a = concentric_mode_matrix(m.unsigned_abs() as usize, radii).transpose();
        let b: Vec<Complex64> = (0..n).map(|j| data.rows[j][idx]).collect();
        coeffs[idx] = solve_mode(&a, &b)?;
    }
    AlmansiCoefficients::new(n, cutoff, coeffs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Geometry {
    Subdisk { order_n: usize, cutoff: usize, rho: f64 },
    Concentric { radii: Vec<f64>, cutoff: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "mode", rename_all = "snake_case")]
pub enum UniquenessVerdict {
    Unique,
    /// First mode `|m|` whose system is numerically singular.
    Degenerate(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    /// Relative smallest singular value for `|m| = 0..=M`.
    pub per_mode: Vec<f64>,
    pub global_min: f64,
    pub verdict: UniquenessVerdict,
}

/// Singular-value sweep of the per-mode systems for `|m| ≤ M`.
pub fn uniqueness_certificate(geometry: &Geometry) -> Result<UniquenessCertificate> {
    let (cutoff, matrix): (usize, Box<dyn Fn(usize) -> DMatrix<f64>>) = match geometry {
        Geometry::Subdisk { order_n, cutoff, rho } => {
            let cfg = DiskConfig::new(*order_n, *cutoff, *rho)?;
            (*cutoff, Box::new(move |m| dirichlet_mode_matrix(cfg.order_n, m, cfg.radius)))
        }
        Geometry::Concentric { radii, cutoff } => {
            check_radii(radii)?;
            check_cutoff(*cutoff)?;
            let radii = radii.clone();
            (*cutoff, Box::new(move |m| concentric_mode_matrix(m, &radii).transpose()))
        }
    };
    let per_mode: Vec<f64> = (0..=cutoff)
        .map(|m| {
            let a = matrix(m);
            let (row, col) = equilibrate(&a);
            let (smin, smax) = singular_extremes(&apply_scaling(&a, &row, &col));
            relative_smallest_sv(smin, smax)
        })
        .collect();
    let global_min = per_mode.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = match per_mode.iter().position(|&s| !(s > SINGULAR_TOL)) {
        None => UniquenessVerdict::Unique,
        Some(m) => UniquenessVerdict::Degenerate(m),
    };
    Ok(UniquenessCertificate { per_mode, global_min, verdict })
}

/// One application of `Δ`, using
/// `Δ(r^p e^{imθ}) = (p² − m²) r^{p−2} e^{imθ}` with `p = |m| + 2k`,
/// i.e. layer `k` maps to layer `k − 1` with factor `4k(|m| + k)`.
pub fn apply_laplacian(coeffs: &AlmansiCoefficients) -> AlmansiCoefficients {
    let n = coeffs.order_n;
    let mut out = zero_table(n, coeffs.cutoff);
    for (idx, m) in coeffs.modes().enumerate() {
        let am = m.unsigned_abs() as f64;
        for k in 1..n {
            let kf = k as f64;
            out[idx][k - 1] = coeffs.coeffs[idx][k] * (4.0 * kf * (am + kf));
        }
    }
    AlmansiCoefficients { order_n: n, cutoff: coeffs.cutoff, coeffs: out }
}

/// `Re Σ a_{m,k} (d/dr)^j [r^{|m|+2k}] e^{imθ}`.
pub fn eval_field(coeffs: &AlmansiCoefficients, r: f64, theta: f64, radial_deriv_order: usize) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::InvalidParameters(format!("need finite r ≥ 0, got r = {r}, θ = {theta}")));
    }
    Ok(eval_field_complex(coeffs, r, theta, radial_deriv_order).re)
}

pub(crate) fn eval_field_complex(coeffs: &AlmansiCoefficients, r: f64, theta: f64, j: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, m) in coeffs.modes().enumerate() {
        let am = m.unsigned_abs() as usize;
        let mut radial = Complex64::new(0.0, 0.0);
        for (k, a) in coeffs.coeffs[idx].iter().enumerate() {
            if a.norm() != 0.0 {
                radial += a * radial_power_derivative(am + 2 * k, j, r);
            }
        }
        if radial.norm() != 0.0 {
            acc += radial * Complex64::from_polar(1.0, m as f64 * theta);
        }
    }
    acc
}

/// Fourier coefficient of `∂^j u/∂r^j` on the circle of radius `r`, mode `m`.
pub fn radial_mode_value(coeffs: &AlmansiCoefficients, r: f64, m: i64, j: usize) -> Complex64 {
    if m.unsigned_abs() as usize > coeffs.cutoff {
        return Complex64::new(0.0, 0.0);
    }
    let idx = (m + coeffs.cutoff as i64) as usize;
    let am = m.unsigned_abs() as usize;
    coeffs.coeffs[idx]
        .iter()
        .enumerate()
        .map(|(k, a)| a * radial_power_derivative(am + 2 * k, j, r))
        .sum()
}

/// Field samples `(r, θ, u)` on a polar grid of `nr × ntheta` points.
pub fn sample_polar(coeffs: &AlmansiCoefficients, nr: usize, ntheta: usize, r_max: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(nr * ntheta);
    for i in 0..nr {
        let r = if nr == 1 { r_max } else { r_max * i as f64 / (nr - 1) as f64 };
        for l in 0..ntheta {
            let theta = 2.0 * std::f64::consts::PI * l as f64 / ntheta as f64;
            out.push((r, theta, eval_field_complex(coeffs, r, theta, 0).re));
        }
    }
    out
}
