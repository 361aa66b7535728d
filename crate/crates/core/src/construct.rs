//! Extended Chebyshev systems from chains of positive weights.
//!
//! Given positive `w_0, …, w_N` and an anchor `a`, the system is
//!
//! ```text
//! u_0(t) = w_0(t)
//! u_j(t) = w_0(t) ∫_a^t w_1(t_1) ∫_a^{t_1} w_2(t_2) ⋯ ∫_a^{t_{j-1}} w_j(t_j) dt_j ⋯ dt_1
//! ```
//!
//! The inner integrals `Z_{k,j}(t) = ∫_a^t w_k(s) Z_{k+1,j}(s) ds` (with
//! `Z_{j+1,j} ≡ 1`) form a triangular system that is integrated in one
//! sweep from the anchor to `t` with piecewise Chebyshev (Clenshaw–Curtis)
//! cumulative quadrature. Panels are doubled until two consecutive sweeps
//! agree to the integration tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::system::{factorial, polynomial_derivative, FunctionSystem, Interval, SMOOTH};

/// Absolute tolerance of the nested integration (scaled by `1 + |value|`).
pub const NESTED_TOL: f64 = 1e-11;
const POSITIVITY_GRID: usize = 1024;
const PANEL_DEGREE: usize = 20;
const MAX_PANELS: usize = 1 << 12;

type WeightFn = dyn Fn(f64, usize) -> f64 + Send + Sync;

/// A positive weight with derivative evaluation.
#[derive(Clone)]
pub enum Weight {
    Const(f64),
    /// `scale · e^{rate·t}`
    Exp { scale: f64, rate: f64 },
    /// `intercept + slope·t`
    Affine { intercept: f64, slope: f64 },
    /// Ascending coefficients.
    Polynomial(Vec<f64>),
    /// `f(t, k)` returns the k-th derivative for `k ≤ smoothness`.
    Custom { f: Arc<WeightFn>, smoothness: usize },
}

impl Weight {
    pub fn custom<F>(smoothness: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> f64 + Send + Sync + 'static,
    {
        Weight::Custom { f: Arc::new(f), smoothness }
    }

    pub fn smoothness(&self) -> usize {
        match self {
            Weight::Custom { smoothness, .. } => *smoothness,
            _ => SMOOTH,
        }
    }

    pub fn eval(&self, t: f64, k: usize) -> f64 {
        match self {
            Weight::Const(c) => {
                if k == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Weight::Exp { scale, rate } => scale * rate.powi(k as i32) * (rate * t).exp(),
            Weight::Affine { intercept, slope } => match k {
                0 => intercept + slope * t,
                1 => *slope,
                _ => 0.0,
            },
            Weight::Polynomial(c) => polynomial_derivative(c, t, k),
            Weight::Custom { f, .. } => f(t, k),
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Const(c) => write!(f, "Const({c})"),
            Weight::Exp { scale, rate } => write!(f, "Exp({scale}·e^({rate}t))"),
            Weight::Affine { intercept, slope } => write!(f, "Affine({intercept} + {slope}t)"),
            Weight::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            Weight::Custom { smoothness, .. } => write!(f, "Custom(C^{smoothness})"),
        }
    }
}

/// Positive weights `w_0..w_N`, the lower limit of integration and the domain.
#[derive(Debug, Clone)]
pub struct WeightChain {
    weights: Vec<Weight>,
    anchor: f64,
    domain: Interval,
}

impl WeightChain {
    /// Validates positivity on a 1024-point grid of the domain and the
    /// smoothness requirement `w_i ∈ C^{N-i}`.
    pub fn new(weights: Vec<Weight>, anchor: f64, domain: Interval) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameters("weight chain is empty".into()));
        }
        if !domain.contains(anchor) {
            return Err(Error::InvalidParameters(format!(
                "anchor {anchor} is outside the domain {domain}"
            )));
        }
        let n = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if w.smoothness() < n - i {
                return Err(Error::InvalidParameters(format!(
                    "w_{i} must be C^{} but is declared C^{}",
                    n - i,
                    w.smoothness()
                )));
            }
            for t in domain.grid(POSITIVITY_GRID) {
                let v = w.eval(t, 0);
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::NonPositiveWeight { index: i, t });
                }
            }
        }
        Ok(Self { weights, anchor, domain })
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }
}

/// Evaluator behind a `nested` [`FunctionSystem`].
#[derive(Debug)]
pub struct NestedSystem {
    chain: WeightChain,
}

/// Builds the ET-system of the weight chain.
pub fn build_nested(chain: WeightChain) -> FunctionSystem {
    FunctionSystem::nested(Arc::new(NestedSystem { chain }))
}

/// `u_j^{(deriv_order)}(t)` of a nested system.
pub fn nested_derivative(system: &FunctionSystem, j: usize, t: f64, deriv_order: usize) -> Result<f64> {
    if system.as_nested().is_none() {
        return Err(Error::InvalidParameters(format!(
            "expected a nested system, got {}",
            system.family_id()
        )));
    }
    system.eval(j, t, deriv_order)
}

impl NestedSystem {
    pub fn chain(&self) -> &WeightChain {
        &self.chain
    }

    pub(crate) fn domain(&self) -> Interval {
        self.chain.domain
    }

    pub(crate) fn order_count(&self) -> usize {
        self.chain.weights.len()
    }

    /// `u_j^{(d)}` needs `w_i^{(d-i)}`, so the system is `C^{min_i(s_i + i)}`.
    pub(crate) fn smoothness(&self) -> usize {
        self.chain
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| w.smoothness().saturating_add(i))
            .min()
            .unwrap_or(SMOOTH)
    }

    /// Values `Z_{k,j}(t)` for `1 ≤ k ≤ j`, stored as `z[k-1]`, plus the
    /// trailing `Z_{j+1,j} = 1`.
    fn inner_integrals(&self, j: usize, t: f64) -> Result<Vec<f64>> {
        let mut ones = vec![0.0; j + 1];
        ones[j] = 1.0;
        if j == 0 || t == self.chain.anchor {
            return Ok(ones);
        }
        let weights = &self.chain.weights[1..=j];
        let mut panels = 1;
        let mut prev = sweep(weights, self.chain.anchor, t, panels);
        loop {
            panels *= 2;
            let next = sweep(weights, self.chain.anchor, t, panels);
            let converged = prev
                .iter()
                .zip(&next)
                .all(|(p, q)| (p - q).abs() <= 0.1 * NESTED_TOL * (1.0 + q.abs()));
            if converged {
                let mut out = next;
                out.push(1.0);
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Integration { t });
                }
                return Ok(out);
            }
            if panels >= MAX_PANELS {
                return Err(Error::Integration { t });
            }
            prev = next;
        }
    }

    pub(crate) fn eval(&self, j: usize, t: f64, d: usize) -> Result<f64> {
        let w = &self.chain.weights;
        let z = self.inner_integrals(j, t)?;
        // deriv[k][e] = e-th derivative of Z_{k+1, j} (index shift: row k ↔ Z_{k+1})
        // Z_{k}' = w_k Z_{k+1}, so Z_k^{(e)} = Σ_i C(e-1, i) w_k^{(i)} Z_{k+1}^{(e-1-i)}.
        let mut deriv = vec![vec![0.0; d + 1]; j + 1];
        deriv[j][0] = 1.0;
        for k in (1..=j).rev() {
            deriv[k - 1][0] = z[k - 1];
            for e in 1..=d {
                let mut acc = 0.0;
                for i in 0..e {
                    acc += binomial(e - 1, i) * w[k].eval(t, i) * deriv[k][e - 1 - i];
                }
                deriv[k - 1][e] = acc;
            }
        }
        // u_j = w_0 · Z_{1,j}
        let mut out = 0.0;
        for i in 0..=d {
            out += binomial(d, i) * w[0].eval(t, d - i) * deriv[0][i];
        }
        Ok(out)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

struct ChebyshevRule {
    nodes: Vec<f64>,
    /// `cumulative[i][l] = ∫_{-1}^{x_i} ℓ_l(x) dx` for the Lobatto nodes,
    /// ordered from −1 to 1.
    cumulative: Vec<Vec<f64>>,
}

fn chebyshev_rule() -> &'static ChebyshevRule {
    static RULE: OnceLock<ChebyshevRule> = OnceLock::new();
    RULE.get_or_init(|| build_rule(PANEL_DEGREE))
}

/// Clenshaw–Curtis cumulative integration matrix on Chebyshev–Lobatto points.
fn build_rule(n: usize) -> ChebyshevRule {
    // x_i = -cos(iπ/n), ascending
    let nodes: Vec<f64> = (0..=n).map(|i| -(i as f64 * PI / n as f64).cos()).collect();
    // Values f_l at the nodes → Chebyshev coefficients c_k (DCT-I on the
    // ascending grid, T_k(x_i) = (-1)^k cos(ikπ/n)).
    let t_at = |k: usize, i: usize| {
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        s * ((i * k) as f64 * PI / n as f64).cos()
    };
    let mut coef = vec![vec![0.0; n + 1]; n + 1]; // coef[k][l]
    for (k, row) in coef.iter_mut().enumerate() {
        for (l, c) in row.iter_mut().enumerate() {
            let wl = if l == 0 || l == n { 0.5 } else { 1.0 };
            *c = 2.0 / n as f64 * wl * t_at(k, l);
        }
        if k == 0 || k == n {
            row.iter_mut().for_each(|c| *c *= 0.5);
        }
    }
    // ∫_{-1}^{x} T_k: T_0 → T_1 + 1, T_1 → (T_2 − 1)/4,
    // T_k → T_{k+1}/(2(k+1)) − T_{k−1}/(2(k−1)) − (−1)^k/(k²−1)
    let cheb_t = |k: usize, x: f64| (k as f64 * x.clamp(-1.0, 1.0).acos()).cos();
    let int_t = |k: usize, x: f64| match k {
        0 => x + 1.0,
        1 => 0.25 * (cheb_t(2, x) - 1.0),
        _ => {
            let kf = k as f64;
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            cheb_t(k + 1, x) / (2.0 * (kf + 1.0)) - cheb_t(k - 1, x) / (2.0 * (kf - 1.0))
                - s / (kf * kf - 1.0)
        }
    };
    let cumulative = nodes
        .iter()
        .map(|&x| {
            (0..=n)
                .map(|l| (0..=n).map(|k| coef[k][l] * int_t(k, x)).sum())
                .collect()
        })
        .collect();
    ChebyshevRule { nodes, cumulative }
}

/// One sweep over `panels` equal panels from `a` to `t`. Returns
/// `[Z_{1,j}(t), …, Z_{j,j}(t)]` for `j = weights.len()`.
fn sweep(weights: &[Weight], a: f64, t: f64, panels: usize) -> Vec<f64> {
    let rule = chebyshev_rule();
    let m = rule.nodes.len();
    let j = weights.len();
    let h = (t - a) / panels as f64;
    // carry[k] = Z_{k+1}(panel start)
    let mut carry = vec![0.0; j];
    let mut values = vec![vec![0.0; m]; j + 1];
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let xs: Vec<f64> = rule.nodes.iter().map(|x| lo + 0.5 * h * (x + 1.0)).collect();
        values[j].iter_mut().for_each(|v| *v = 1.0);
        for k in (0..j).rev() {
            let integrand: Vec<f64> = xs
                .iter()
                .zip(&values[k + 1])
                .map(|(&x, &z)| weights[k].eval(x, 0) * z)
                .collect();
            for i in 0..m {
                let s: f64 = rule.cumulative[i].iter().zip(&integrand).map(|(c, f)| c * f).sum();
                values[k][i] = carry[k] + 0.5 * h * s;
            }
        }
        for k in 0..j {
            carry[k] = values[k][m - 1];
        }
    }
    carry
}
