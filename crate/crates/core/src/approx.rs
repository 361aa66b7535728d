//! Best uniform approximation from the span of a T-system.
//!
//! [`remez`] runs a single-point exchange on a reference of `order_count + 1`
//! points; [`verify_alternation`] checks a candidate against the
//! equioscillation criterion: `u_0` is a best approximation iff the error
//! `f − u_0` attains `±δ` with alternating signs at `order_count + 1` points.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::colloc::golden_min;
use crate::error::{Error, Result};
use crate::linalg::solve_checked;
use crate::system::{FunctionSystem, Interval, SpanElement};

/// Uniform scan size of the extremum search.
pub const SCAN_POINTS: usize = 2001;
/// Golden-section refinement tolerance in `t`.
pub const REFINE_TOL: f64 = 1e-12;
/// Extrema within this (times `max(1, δ)`) of the maximal error count as
/// alternation points.
pub const ALTERNATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialReference {
    /// Chebyshev extrema `-cos(iπ/n)` mapped to the interval.
    Chebyshev,
    /// Equally spaced, endpoints included.
    Uniform,
    /// Caller-supplied strictly increasing points.
    Points(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemezOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub initial: InitialReference,
}

impl Default for RemezOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 50, initial: InitialReference::Chebyshev }
    }
}

/// Alternation certificate: `f(t_j) − u_0(t_j) = δ·ε·(−1)^j` for
/// `j = 1..=order_count+1`, up to the certificate tolerance.
#[derive(Debug, Clone)]
pub struct AlternationResult {
    pub solution: SpanElement,
    pub delta: f64,
    pub points: Vec<f64>,
    pub epsilon_sign: i8,
    pub iterations: usize,
    pub converged: bool,
    /// `|λ_k|`, the levelled error of each Remez iteration.
    pub levels: Vec<f64>,
    /// The error vanishes identically (δ = 0); points carry no sign.
    pub degenerate: bool,
}

impl AlternationResult {
    /// Errors `f(t_j) − u_0(t_j)` at the alternation points.
    pub fn errors_at_points<F: Fn(f64) -> f64>(&self, f: F) -> Result<Vec<f64>> {
        self.points.iter().map(|&t| Ok(f(t) - self.solution.eval(t, 0)?)).collect()
    }
}

/// A candidate that fails the alternation criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternationRefutation {
    /// Point of maximal error.
    pub witness_t: f64,
    pub witness_error: f64,
    /// Longest sign-alternating run among near-maximal extrema.
    pub alternation_count: usize,
    pub required: usize,
    /// Largest error level that does alternate `required` times; the
    /// witness exceeds it by more than the tolerance.
    pub alternation_level: f64,
}

#[derive(Debug, Clone)]
pub enum AlternationCheck {
    Certificate(AlternationResult),
    Refuted(AlternationRefutation),
}

fn initial_points(initial: &InitialReference, interval: &Interval, n: usize) -> Result<Vec<f64>> {
    let (a, b) = (interval.a(), interval.b());
    let pts = match initial {
        InitialReference::Chebyshev => (0..n)
            .map(|i| {
                if i == 0 {
                    a
                } else if i == n - 1 {
                    b
                } else {
                    let x = -(i as f64 * PI / (n - 1) as f64).cos();
                    0.5 * (a + b) + 0.5 * (b - a) * x
                }
            })
            .collect(),
        InitialReference::Uniform => interval.grid(n),
        InitialReference::Points(p) => p.clone(),
    };
    if pts.len() != n
        || pts.windows(2).any(|w| w[0] >= w[1])
        || pts.iter().any(|&t| !interval.contains(t))
    {
        return Err(Error::InvalidParameters(format!(
            "reference must be {n} strictly increasing points in {interval}"
        )));
    }
    Ok(pts)
}

fn error_at<F: Fn(f64) -> f64>(f: &F, u: &SpanElement, t: f64) -> Result<f64> {
    let ft = f(t);
    if !ft.is_finite() {
        return Err(Error::NonFinite(format!("f({t})")));
    }
    Ok(ft - u.eval(t, 0)?)
}

/// Golden-section maximisation of `|e|` on `[lo, hi]`.
fn refine_max<F: Fn(f64) -> f64>(f: &F, u: &SpanElement, lo: f64, hi: f64) -> f64 {
    golden_min(
        |t| error_at(f, u, t).map(|e| -e.abs()).unwrap_or(f64::INFINITY),
        lo,
        hi,
        REFINE_TOL,
    )
}

/// Global maximiser of `|f − u|`: the largest refined local extremum.
/// Ties go to the smaller `t`.
fn global_extremum<F: Fn(f64) -> f64>(f: &F, u: &SpanElement, interval: &Interval) -> Result<(f64, f64)> {
    let extrema = local_extrema(f, u, interval)?;
    Ok(extrema
        .into_iter()
        .fold((interval.a(), 0.0f64), |best, (t, e)| if e.abs() > best.1.abs() { (t, e) } else { best }))
}

/// Local maximisers of `|f − u|` (endpoints included), each refined.
fn local_extrema<F: Fn(f64) -> f64>(f: &F, u: &SpanElement, interval: &Interval) -> Result<Vec<(f64, f64)>> {
    let ts = interval.grid(SCAN_POINTS);
    let es = ts.iter().map(|&t| error_at(f, u, t)).collect::<Result<Vec<_>>>()?;
    let n = ts.len();
    let mut out = Vec::new();
    for i in 0..n {
        let left = if i > 0 { es[i - 1].abs() } else { f64::NEG_INFINITY };
        let right = if i + 1 < n { es[i + 1].abs() } else { f64::NEG_INFINITY };
        let c = es[i].abs();
        if c < left || c < right {
            continue;
        }
        let (mut t, mut e) = (ts[i], es[i]);
        if i > 0 && i + 1 < n {
            let tr = refine_max(f, u, ts[i - 1], ts[i + 1]);
            let er = error_at(f, u, tr)?;
            if er.abs() > e.abs() {
                (t, e) = (tr, er);
            }
        }
        out.push((t, e));
    }
    Ok(out)
}

fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Replaces one reference point by `z` keeping the sign alternation.
/// `signs[i]` is the sign of the error at `reference[i]`.
fn exchange(reference: &mut Vec<f64>, signs: &[i8], z: f64, s: i8) {
    let last = reference.len() - 1;
    if z < reference[0] {
        if signs[0] == s {
            reference[0] = z;
        } else {
            reference.pop();
            reference.insert(0, z);
        }
    } else if z > reference[last] {
        if signs[last] == s {
            reference[last] = z;
        } else {
            reference.remove(0);
            reference.push(z);
        }
    } else if let Some(i) = (0..last).find(|&i| reference[i] <= z && z <= reference[i + 1]) {
        if reference[i] == z || reference[i + 1] == z {
            return;
        }
        if signs[i] == s {
            reference[i] = z;
        } else {
            reference[i + 1] = z;
        }
    }
}

/// Remez exchange for `min_{u ∈ span} max_{t ∈ interval} |f(t) − u(t)|`.
///
/// Stops when the maximal error exceeds the levelled error by at most
/// `tol · (1 + max error)`; otherwise returns the last iterate with
/// `converged = false` after `max_iter` iterations.
pub fn remez<F: Fn(f64) -> f64>(
    system: &FunctionSystem,
    f: F,
    interval: &Interval,
    options: &RemezOptions,
) -> Result<AlternationResult> {
    if !system.domain().contains_interval(interval) {
        return Err(Error::InvalidParameters(format!(
            "interval {interval} is not inside the system domain {}",
            system.domain()
        )));
    }
    let n = system.order_count();
    let mut reference = initial_points(&options.initial, interval, n + 1)?;
    let mut levels = Vec::new();
    let mut last = None;
    for iteration in 1..=options.max_iter.max(1) {
        let mut a = DMatrix::zeros(n + 1, n + 1);
        let mut rhs = DVector::zeros(n + 1);
        for (i, &x) in reference.iter().enumerate() {
            for j in 0..n {
                a[(i, j)] = system.eval(j, x, 0)?;
            }
            a[(i, n)] = if i % 2 == 0 { 1.0 } else { -1.0 };
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFinite(format!("f({x})")));
            }
            rhs[i] = fx;
        }
        let sol = solve_checked(&a, &rhs)?;
        let lambda = sol[n];
        let u = SpanElement::new(system.clone(), sol.rows(0, n).iter().copied().collect())?;
        levels.push(lambda.abs());
        let (z, ez) = global_extremum(&f, &u, interval)?;
        let converged = ez.abs() - lambda.abs() <= options.tol * (1.0 + ez.abs());
        let signs: Vec<i8> = (0..=n)
            .map(|i| {
                let s = sign_of(if i % 2 == 0 { lambda } else { -lambda });
                if s == 0 {
                    if i % 2 == 0 { 1 } else { -1 }
                } else {
                    s
                }
            })
            .collect();
        let epsilon_sign = -signs[0];
        let delta = ez.abs();
        last = Some(AlternationResult {
            solution: u,
            delta,
            points: reference.clone(),
            epsilon_sign,
            iterations: iteration,
            converged,
            levels: levels.clone(),
            degenerate: delta == 0.0,
        });
        if converged {
            break;
        }
        exchange(&mut reference, &signs, z, sign_of(ez));
    }
    Ok(last.expect("at least one iteration"))
}

/// Checks `candidate` against the alternation criterion.
pub fn verify_alternation<F: Fn(f64) -> f64>(
    system: &FunctionSystem,
    f: F,
    candidate: &SpanElement,
    interval: &Interval,
) -> Result<AlternationCheck> {
    let required = system.order_count() + 1;
    let extrema = local_extrema(&f, candidate, interval)?;
    let (wt, we) = extrema
        .iter()
        .copied()
        .fold((interval.a(), 0.0f64), |acc, (t, e)| if e.abs() > acc.1.abs() { (t, e) } else { acc });
    let max_err = we.abs();
    if max_err <= 1e-14 {
        return Ok(AlternationCheck::Certificate(AlternationResult {
            solution: candidate.clone(),
            delta: 0.0,
            points: initial_points(&InitialReference::Chebyshev, interval, required)?,
            epsilon_sign: 1,
            iterations: 0,
            converged: true,
            levels: vec![],
            degenerate: true,
        }));
    }
    let threshold = max_err - ALTERNATION_TOL * max_err.max(1.0);
    let near_max = extrema.iter().filter(|(_, e)| e.abs() >= threshold);
    let run = alternating_run(near_max.copied());
    if run.len() >= required {
        let points: Vec<f64> = run.iter().take(required).map(|p| p.0).collect();
        return Ok(AlternationCheck::Certificate(AlternationResult {
            solution: candidate.clone(),
            delta: max_err,
            epsilon_sign: -sign_of(run[0].1),
            points,
            iterations: 0,
            converged: true,
            levels: vec![],
            degenerate: false,
        }));
    }
    let alternation_level = best_window_level(&alternating_run(extrema.iter().copied()), required);
    Ok(AlternationCheck::Refuted(AlternationRefutation {
        witness_t: wt,
        witness_error: we,
        alternation_count: run.len(),
        required,
        alternation_level,
    }))
}

/// Merges same-signed neighbours (keeping the larger magnitude) so that the
/// remaining sequence alternates in sign.
fn alternating_run<I: Iterator<Item = (f64, f64)>>(points: I) -> Vec<(f64, f64)> {
    let mut run: Vec<(f64, f64)> = Vec::new();
    for (t, e) in points {
        if e == 0.0 {
            continue;
        }
        match run.last_mut() {
            Some(last) if sign_of(last.1) == sign_of(e) => {
                if e.abs() > last.1.abs() {
                    *last = (t, e);
                }
            }
            _ => run.push((t, e)),
        }
    }
    run
}

/// Largest `min |e|` over windows of `len` consecutive points of the run.
fn best_window_level(run: &[(f64, f64)], len: usize) -> f64 {
    run.windows(len)
        .map(|w| w.iter().map(|p| p.1.abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}
