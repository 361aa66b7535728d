//! Function systems `{u_j}`, their spans and the evaluation contract shared
//! by every other module.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::NestedSystem;
use crate::dd::Dd;
use crate::error::{Error, Result};

/// Smoothness value meaning "derivatives of every order are available".
pub const SMOOTH: usize = usize::MAX;

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.a) && self.contains(other.b)
    }

    /// `n ≥ 2` equally spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let h = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.b } else { self.a + i as f64 * h })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    Monomial,
    Muntz,
    Cauchy,
    Gauss,
    GreenUnit,
    Nested,
    Custom,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::Monomial => "monomial",
            FamilyId::Muntz => "muntz",
            FamilyId::Cauchy => "cauchy",
            FamilyId::Gauss => "gauss",
            FamilyId::GreenUnit => "green_unit",
            FamilyId::Nested => "nested",
            FamilyId::Custom => "custom",
        };
        f.write_str(s)
    }
}

type CustomFn = dyn Fn(usize, f64, usize) -> f64 + Send + Sync;

struct CustomSystem {
    count: usize,
    smoothness: usize,
    f: Box<CustomFn>,
}

#[derive(Clone)]
enum Family {
    Monomial { count: usize },
    Muntz { exponents: Vec<f64> },
    Cauchy { s: Vec<f64> },
    Gauss { s: Vec<f64> },
    GreenUnit { s: Vec<f64> },
    Nested(Arc<NestedSystem>),
    Custom(Arc<CustomSystem>),
}

/// An ordered family of functions `u_0, …, u_{order_count-1}` on a domain
/// interval, with derivative evaluation up to [`FunctionSystem::smoothness`].
///
/// Cloning is cheap; the system is immutable after construction.
#[derive(Clone)]
pub struct FunctionSystem {
    family: Family,
    domain: Interval,
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite()) && xs.windows(2).all(|w| w[0] < w[1])
}

impl FunctionSystem {
    /// `{1, t, …, t^{count-1}}` on `domain`.
    pub fn monomial(count: usize, domain: Interval) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameters("monomial: count must be ≥ 1".into()));
        }
        Ok(Self { family: Family::Monomial { count }, domain })
    }

    /// `u_j(t) = t^{α_j}` with strictly increasing exponents, domain in `(0, ∞)`.
    pub fn muntz(exponents: Vec<f64>, domain: Interval) -> Result<Self> {
        if exponents.is_empty() || !strictly_increasing(&exponents) {
            return Err(Error::InvalidParameters(
                "muntz: exponents must be non-empty and strictly increasing".into(),
            ));
        }
        if domain.a() <= 0.0 {
            return Err(Error::InvalidParameters("muntz: domain must lie in (0, ∞)".into()));
        }
        Ok(Self { family: Family::Muntz { exponents }, domain })
    }

    /// `u_j(t) = 1 / (s_j + t)` with `0 < s_0 < … < s_N`, domain in `[0, ∞)`.
    pub fn cauchy(s: Vec<f64>, domain: Interval) -> Result<Self> {
        if s.is_empty() || !strictly_increasing(&s) || s[0] <= 0.0 {
            return Err(Error::InvalidParameters(
                "cauchy: s must be positive and strictly increasing".into(),
            ));
        }
        if domain.a() < 0.0 {
            return Err(Error::InvalidParameters("cauchy: domain must lie in [0, ∞)".into()));
        }
        Ok(Self { family: Family::Cauchy { s }, domain })
    }

    /// `u_j(t) = exp(-(s_j - t)^2)` with strictly increasing centres.
    pub fn gauss(s: Vec<f64>, domain: Interval) -> Result<Self> {
        if s.is_empty() || !strictly_increasing(&s) {
            return Err(Error::InvalidParameters("gauss: s must be strictly increasing".into()));
        }
        Ok(Self { family: Family::Gauss { s }, domain })
    }

    /// `u_j(t) = G(s_j, t) = min(s_j, t)·(1 − max(s_j, t))`, the Green function
    /// of `-u''` on `[0, 1]` with Dirichlet conditions.
    ///
    /// Declared smoothness is 1: the first derivative is taken from the right
    /// at `t = s_j`. Callers that need genuine differentiability must keep
    /// knots away from [`FunctionSystem::kinks`].
    pub fn green_unit(s: Vec<f64>, domain: Interval) -> Result<Self> {
        if s.is_empty() || !strictly_increasing(&s) || s[0] <= 0.0 || s[s.len() - 1] >= 1.0 {
            return Err(Error::InvalidParameters(
                "green_unit: need 0 < s_0 < … < s_N < 1".into(),
            ));
        }
        if domain.a() < 0.0 || domain.b() > 1.0 {
            return Err(Error::InvalidParameters("green_unit: domain must lie in [0, 1]".into()));
        }
        Ok(Self { family: Family::GreenUnit { s }, domain })
    }

    /// A user-supplied family. `f(j, t, k)` must return `u_j^{(k)}(t)` for
    /// every `k ≤ smoothness`.
    pub fn custom<F>(count: usize, smoothness: usize, domain: Interval, f: F) -> Result<Self>
    where
        F: Fn(usize, f64, usize) -> f64 + Send + Sync + 'static,
    {
        if count == 0 {
            return Err(Error::InvalidParameters("custom: count must be ≥ 1".into()));
        }
        let inner = CustomSystem { count, smoothness, f: Box::new(f) };
        Ok(Self { family: Family::Custom(Arc::new(inner)), domain })
    }

    /// Custom system whose functions are polynomials given by ascending
    /// coefficient lists, e.g. `[[0,1],[0,0,1]]` is `{t, t²}`.
    pub fn polynomials(coefficients: Vec<Vec<f64>>, domain: Interval) -> Result<Self> {
        if coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameters("custom: non-finite coefficient".into()));
        }
        let count = coefficients.len();
        Self::custom(count, SMOOTH, domain, move |j, t, k| {
            polynomial_derivative(&coefficients[j], t, k)
        })
    }

    pub(crate) fn nested(inner: Arc<NestedSystem>) -> Self {
        let domain = inner.domain();
        Self { family: Family::Nested(inner), domain }
    }

    pub fn family_id(&self) -> FamilyId {
        match &self.family {
            Family::Monomial { .. } => FamilyId::Monomial,
            Family::Muntz { .. } => FamilyId::Muntz,
            Family::Cauchy { .. } => FamilyId::Cauchy,
            Family::Gauss { .. } => FamilyId::Gauss,
            Family::GreenUnit { .. } => FamilyId::GreenUnit,
            Family::Nested(_) => FamilyId::Nested,
            Family::Custom(_) => FamilyId::Custom,
        }
    }

    pub fn order_count(&self) -> usize {
        match &self.family {
            Family::Monomial { count } => *count,
            Family::Muntz { exponents } => exponents.len(),
            Family::Cauchy { s } | Family::Gauss { s } | Family::GreenUnit { s } => s.len(),
            Family::Nested(n) => n.order_count(),
            Family::Custom(c) => c.count,
        }
    }

    /// Highest derivative order that [`FunctionSystem::eval`] accepts;
    /// [`SMOOTH`] for infinitely differentiable families.
    pub fn smoothness(&self) -> usize {
        match &self.family {
            Family::GreenUnit { .. } => 1,
            Family::Nested(n) => n.smoothness(),
            Family::Custom(c) => c.smoothness,
            _ => SMOOTH,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Family parameters: exponents, centres `s_j`, or nothing.
    pub fn params(&self) -> &[f64] {
        match &self.family {
            Family::Muntz { exponents } => exponents,
            Family::Cauchy { s } | Family::Gauss { s } | Family::GreenUnit { s } => s,
            _ => &[],
        }
    }

    /// Points where some `u_j` fails to be differentiable.
    pub fn kinks(&self) -> &[f64] {
        match &self.family {
            Family::GreenUnit { s } => s,
            _ => &[],
        }
    }

    pub(crate) fn as_nested(&self) -> Option<&NestedSystem> {
        match &self.family {
            Family::Nested(n) => Some(n),
            _ => None,
        }
    }

    /// `u_j^{(deriv_order)}(t)`.
    pub fn eval(&self, j: usize, t: f64, deriv_order: usize) -> Result<f64> {
        let count = self.order_count();
        if j >= count {
            return Err(Error::IndexOutOfRange { index: j, count });
        }
        let smoothness = self.smoothness();
        if deriv_order > smoothness {
            return Err(Error::DerivativeOrder { order: deriv_order, smoothness });
        }
        if !self.domain.contains(t) {
            return Err(Error::OutsideDomain { t, a: self.domain.a(), b: self.domain.b() });
        }
        let k = deriv_order;
        let value = match &self.family {
            Family::Monomial { .. } => {
                if k > j {
                    0.0
                } else {
                    falling_factorial(j as f64, k) * t.powi((j - k) as i32)
                }
            }
            Family::Muntz { exponents } => {
                let alpha = exponents[j];
                let c = falling_factorial(alpha, k);
                if c == 0.0 {
                    0.0
                } else {
                    c * t.powf(alpha - k as f64)
                }
            }
            Family::Cauchy { s } => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * factorial(k) / (s[j] + t).powi(k as i32 + 1)
            }
            Family::Gauss { s } => {
                let x = t - s[j];
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * hermite_phys(k, x) * (-x * x).exp()
            }
            Family::GreenUnit { s } => {
                let s = s[j];
                match (k, t < s) {
                    (0, _) => t.min(s) * (1.0 - t.max(s)),
                    (_, true) => 1.0 - s,
                    (_, false) => -s,
                }
            }
            Family::Nested(n) => n.eval(j, t, k)?,
            Family::Custom(c) => (c.f)(j, t, k),
        };
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("u_{j}^({k})({t})")));
        }
        Ok(value)
    }
}

impl FunctionSystem {
    /// `eval` carried in double-double where the closed form allows it
    /// (monomial and Cauchy families); other families are promoted from f64.
    pub(crate) fn eval_dd(&self, j: usize, t: f64, k: usize) -> Result<Dd> {
        let value = self.eval(j, t, k)?;
        Ok(match &self.family {
            Family::Monomial { .. } if k > j => Dd::from(0.0),
            Family::Monomial { .. } => Dd::from(falling_factorial(j as f64, k)) * Dd::from(t).powi(j - k),
            Family::Cauchy { s } => {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Dd::from(sign * factorial(k)) / Dd::sum(s[j], t).powi(k + 1)
            }
            _ => Dd::from(value),
        })
    }
}

impl fmt::Debug for FunctionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSystem")
            .field("family", &self.family_id())
            .field("order_count", &self.order_count())
            .field("params", &self.params())
            .field("domain", &self.domain)
            .finish()
    }
}

/// `Σ_j coefficients[j]·u_j`.
#[derive(Clone, Debug)]
pub struct SpanElement {
    system: FunctionSystem,
    coefficients: Vec<f64>,
}

impl SpanElement {
    pub fn new(system: FunctionSystem, coefficients: Vec<f64>) -> Result<Self> {
        let expected = system.order_count();
        if coefficients.len() != expected {
            return Err(Error::CoefficientLength { got: coefficients.len(), expected });
        }
        Ok(Self { system, coefficients })
    }

    pub fn zero(system: FunctionSystem) -> Self {
        let n = system.order_count();
        Self { system, coefficients: vec![0.0; n] }
    }

    pub fn system(&self) -> &FunctionSystem {
        &self.system
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, t: f64, deriv_order: usize) -> Result<f64> {
        eval_span(self, t, deriv_order)
    }
}

/// `Σ_j c_j u_j^{(deriv_order)}(t)`.
pub fn eval_span(u: &SpanElement, t: f64, deriv_order: usize) -> Result<f64> {
    let mut acc = 0.0;
    for (j, &c) in u.coefficients.iter().enumerate() {
        let v = u.system.eval(j, t, deriv_order)?;
        if c != 0.0 {
            acc += c * v;
        }
    }
    Ok(acc)
}

/// `x (x-1) ⋯ (x-k+1)`.
pub(crate) fn falling_factorial(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64))
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Physicists' Hermite polynomial `H_k(x)`.
fn hermite_phys(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if k == 0 {
        return prev;
    }
    for n in 1..k {
        let next = 2.0 * x * cur - 2.0 * n as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// k-th derivative of `Σ c_i t^i`.
pub(crate) fn polynomial_derivative(coefficients: &[f64], t: f64, k: usize) -> f64 {
    coefficients
        .iter()
        .enumerate()
        .skip(k)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * t + c * falling_factorial(i as f64, k))
}
