//! Moment problems: verification of atomic representing measures for any
//! system, and Gauss quadrature recovered from monomial moments.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{FunctionSystem, Interval};

/// Largest number of Gauss nodes recovered in double precision.
pub const MAX_GAUSS_NODES: usize = 12;
/// Relative pivot floor of the Hankel factorization.
pub const HANKEL_PIVOT_FLOOR: f64 = 1e-12;

/// Prescribed moments `∫ u_j dμ = c_j`, one per function of the system.
#[derive(Debug, Clone)]
pub struct MomentData {
    system: FunctionSystem,
    moments: Vec<f64>,
}

impl MomentData {
    pub fn new(system: FunctionSystem, moments: Vec<f64>) -> Result<Self> {
        if moments.len() != system.order_count() {
            return Err(Error::InvalidData(format!(
                "{} moments given for a system of {} functions",
                moments.len(),
                system.order_count()
            )));
        }
        Ok(Self { system, moments })
    }

    pub fn system(&self) -> &FunctionSystem {
        &self.system
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }
}

/// `Σ_i weights[i] δ_{nodes[i]}` with increasing nodes and nonnegative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidData("nodes and weights must be non-empty and of equal length".into()));
        }
        if nodes.iter().chain(&weights).any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("non-finite node or weight".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidData("nodes must be strictly increasing".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidData("weights must be nonnegative".into()));
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ g dμ`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }

    /// Monomial moments `c_0..c_{count-1}`.
    pub fn power_moments(&self, count: usize) -> Vec<f64> {
        (0..count).map(|k| self.integrate(|x| x.powi(k as i32))).collect()
    }
}

/// `max_j |Σ_i w_i u_j(x_i) − c_j|`.
pub fn verify_measure(data: &MomentData, mu: &AtomicMeasure) -> Result<f64> {
    let sys = &data.system;
    let mut worst = 0.0f64;
    for (j, &c) in data.moments.iter().enumerate() {
        let mut s = 0.0;
        for (&x, &w) in mu.nodes.iter().zip(&mu.weights) {
            s += w * sys.eval(j, x, 0)?;
        }
        worst = worst.max((s - c).abs());
    }
    Ok(worst)
}

/// Recurrence coefficients `α_0..α_{n-1}`, `β_1..β_{n-1}` of the monic
/// orthogonal polynomials for `⟨t^j, t^k⟩ = c_{j+k}`, from the upper
/// triangular factor of the Hankel matrix bordered by one extra column.
pub fn recurrence_from_moments(moments: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if moments.len() < 2 || moments.len() % 2 != 0 {
        return Err(Error::InvalidData(format!(
            "need an even number (≥ 2) of moments c_0..c_(2n-1), got {}",
            moments.len()
        )));
    }
    if moments.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidData("non-finite moment".into()));
    }
    let n = moments.len() / 2;
    if n > MAX_GAUSS_NODES {
        return Err(Error::Conditioning(format!(
            "{n} nodes requested; at most {MAX_GAUSS_NODES} are supported in double precision"
        )));
    }
    let c0 = moments[0];
    if !(c0 > 0.0) {
        return Err(Error::NotPositiveDefinite { index: 0, pivot: c0 });
    }
    // R is n × (n+1), H[i][j] = c_{i+j} = Σ_k R[k][i] R[k][j]
    let mut r = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        let pivot = moments[2 * i] - (0..i).map(|k| r[k][i] * r[k][i]).sum::<f64>();
        if !(pivot > HANKEL_PIVOT_FLOOR * c0) {
            return Err(Error::NotPositiveDefinite { index: i, pivot });
        }
        r[i][i] = pivot.sqrt();
        for j in i + 1..=n {
            let s = moments[i + j] - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            r[i][j] = s / r[i][i];
        }
    }
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n {
        let prev = if j == 0 { 0.0 } else { r[j - 1][j] / r[j - 1][j - 1] };
        alpha.push(r[j][j + 1] / r[j][j] - prev);
        if j + 1 < n {
            let q = r[j + 1][j + 1] / r[j][j];
            beta.push(q * q);
        }
    }
    Ok((alpha, beta))
}

/// n-point Gauss rule reproducing the moments `c_0..c_{2n-1}`.
///
/// Nodes are the eigenvalues of the Jacobi matrix; weights are `c_0` times
/// the squared first components of its normalized eigenvectors.
pub fn gauss_from_moments(moments: &[f64], interval: &Interval) -> Result<AtomicMeasure> {
    let (alpha, beta) = recurrence_from_moments(moments)?;
    let n = alpha.len();
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)].sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], moments[0] * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let slack = 1e-12 * interval.width().max(1.0);
    for p in pairs.iter_mut() {
        if p.0 < interval.a() - slack || p.0 > interval.b() + slack {
            return Err(Error::InvalidData(format!(
                "recovered node {} lies outside {interval}: the moments do not come from a measure on it",
                p.0
            )));
        }
        p.0 = p.0.clamp(interval.a(), interval.b());
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    AtomicMeasure::new(nodes, weights)
}

/// Monic polynomial coefficients (ascending) with the given roots.
pub fn monic_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        p = next;
    }
    p
}
