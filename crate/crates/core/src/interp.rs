//! Lagrange / Hermite interpolation in the span of a system, the two-point
//! Dirichlet-type problem and its boundary basis.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::colloc::{collocation_matrix, Knot, KnotSpec};
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, solve_checked};
use crate::system::{FunctionSystem, SpanElement};

/// Hermite data: for knot `j` of multiplicity `m_j`, the prescribed values
/// `u^{(k)}(t_j)` for `k = 0..m_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteData {
    knots: KnotSpec,
    values: Vec<Vec<f64>>,
}

impl HermiteData {
    pub fn new(knots: KnotSpec, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != knots.knots().len()
            || values.iter().zip(knots.knots()).any(|(v, k)| v.len() != k.multiplicity)
        {
            return Err(Error::InvalidData(
                "one value per knot and derivative order is required".into(),
            ));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite interpolation value".into()));
        }
        Ok(Self { knots, values })
    }

    /// Builds knots and values together from `(t, [u(t), u'(t), …])` pairs.
    pub fn from_pairs(pairs: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let knots = KnotSpec::new(
            pairs.iter().map(|(t, v)| Knot { t: *t, multiplicity: v.len() }).collect(),
        )?;
        Self::new(knots, pairs.into_iter().map(|(_, v)| v).collect())
    }

    pub fn knots(&self) -> &KnotSpec {
        &self.knots
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    fn flat_values(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }
}

/// Unique element of the span matching all Hermite conditions.
pub fn hermite_solve(system: &FunctionSystem, data: &HermiteData) -> Result<SpanElement> {
    let m = collocation_matrix(system, &data.knots)?;
    // condition columns → equations: Σ_i c_i M[i, col] = value[col]
    let a = m.transpose();
    let b = DVector::from_vec(data.flat_values());
    let x = solve_checked(&a, &b)?;
    SpanElement::new(system.clone(), x.iter().copied().collect())
}

/// Largest `|u^{(k)}(t_j) − c_{j,k}|` over all conditions.
pub fn hermite_residual(u: &SpanElement, data: &HermiteData) -> Result<f64> {
    let mut worst = 0.0f64;
    for (knot, vals) in data.knots.knots().iter().zip(&data.values) {
        for (k, &c) in vals.iter().enumerate() {
            worst = worst.max((u.eval(knot.t, k)? - c).abs());
        }
    }
    Ok(worst)
}

/// Endpoint data for the Dirichlet-type problem on `[alpha, beta]`:
/// `u^{(k)}(alpha) = left[k]`, `u^{(k)}(beta) = right[k]`, `k < N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DTData {
    pub alpha: f64,
    pub beta: f64,
    pub left_values: Vec<f64>,
    pub right_values: Vec<f64>,
}

impl DTData {
    pub fn new(alpha: f64, beta: f64, left_values: Vec<f64>, right_values: Vec<f64>) -> Result<Self> {
        if !(alpha < beta) {
            return Err(Error::InvalidData(format!("need alpha < beta, got {alpha} ≥ {beta}")));
        }
        if left_values.is_empty() || left_values.len() != right_values.len() {
            return Err(Error::InvalidData(
                "left and right data must have the same positive length N".into(),
            ));
        }
        Ok(Self { alpha, beta, left_values, right_values })
    }

    /// The `N` of the problem.
    pub fn order(&self) -> usize {
        self.left_values.len()
    }

    fn as_hermite(&self) -> Result<HermiteData> {
        HermiteData::from_pairs(vec![
            (self.alpha, self.left_values.clone()),
            (self.beta, self.right_values.clone()),
        ])
    }
}

fn check_dt_system(system: &FunctionSystem, n: usize) -> Result<()> {
    if system.order_count() != 2 * n {
        return Err(Error::InvalidData(format!(
            "two-point problem with N = {n} needs a system of 2N = {} functions, got {}",
            2 * n,
            system.order_count()
        )));
    }
    Ok(())
}

/// Unique span element with `N` derivative conditions at each endpoint.
pub fn dt_solve(system: &FunctionSystem, data: &DTData) -> Result<SpanElement> {
    check_dt_system(system, data.order())?;
    hermite_solve(system, &data.as_hermite()?)
}

/// `v_j` (`u^{(k)}(alpha) = δ_{jk}`, zero at `beta`) and `w_j` (zero at
/// `alpha`, `u^{(k)}(beta) = δ_{jk}`) for `j = 0..N`.
pub fn dt_boundary_basis(
    system: &FunctionSystem,
    alpha: f64,
    beta: f64,
) -> Result<(Vec<SpanElement>, Vec<SpanElement>)> {
    let count = system.order_count();
    if count % 2 != 0 {
        return Err(Error::InvalidData(format!(
            "boundary basis needs an even number of functions, got {count}"
        )));
    }
    let n = count / 2;
    let delta = |j: usize| (0..n).map(|k| if k == j { 1.0 } else { 0.0 }).collect::<Vec<_>>();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for j in 0..n {
        left.push(dt_solve(system, &DTData::new(alpha, beta, delta(j), vec![0.0; n])?)?);
        right.push(dt_solve(system, &DTData::new(alpha, beta, vec![0.0; n], delta(j))?)?);
    }
    Ok((left, right))
}

/// Numerical rank of the collocation matrix; equals `order_count` exactly
/// when the knots are unisolvent.
pub fn dimension_check(system: &FunctionSystem, knots: &KnotSpec) -> Result<usize> {
    Ok(numerical_rank(&collocation_matrix(system, knots)?))
}
