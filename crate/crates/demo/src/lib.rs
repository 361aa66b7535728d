//! Browser demo. Each export takes plain numbers and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use chebsys::approx::{remez, RemezOptions};
use chebsys::colloc::{collocation_determinant, KnotSpec};
use chebsys::polyharmonic::{
    eval_field, solve_dirichlet_disk, uniqueness_certificate, DiskConfig, FourierBoundaryData, Geometry,
};
use chebsys::{FunctionSystem, Interval};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn target_fn(name: &str) -> Option<fn(f64) -> f64> {
    Some(match name {
        "abs" => f64::abs,
        "exp" => f64::exp,
        "runge" => |t| 1.0 / (1.0 + 25.0 * t * t),
        "sin3" => |t| (3.0 * t).sin(),
        "sqrt_abs" => |t| t.abs().sqrt(),
        _ => return None,
    })
}

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

pub fn remez_curve_value(target: &str, degree: usize, points: usize) -> Result<Value, String> {
    let f = target_fn(target).ok_or_else(|| format!("unknown target `{target}`"))?;
    let interval = Interval::new(-1.0, 1.0).map_err(|e| e.to_string())?;
    let sys = FunctionSystem::monomial(degree + 1, interval).map_err(|e| e.to_string())?;
    let best = remez(&sys, f, &interval, &RemezOptions::default()).map_err(|e| e.to_string())?;
    let mut curve = Vec::with_capacity(points);
    for t in interval.grid(points.max(2)) {
        let u = best.solution.eval(t, 0).map_err(|e| e.to_string())?;
        curve.push([t, f(t), u]);
    }
    let reference: Vec<[f64; 2]> = best
        .points
        .iter()
        .map(|&t| Ok([t, f(t) - best.solution.eval(t, 0)?]))
        .collect::<chebsys::Result<_>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "coefficients": best.solution.coefficients(),
        "delta": best.delta,
        "iterations": best.iterations,
        "converged": best.converged,
        "reference": reference,
        "curve": curve,
    }))
}

/// Minimax polynomial of the given degree on `[-1, 1]`; `curve` rows are
/// `[t, f(t), u(t)]`.
#[wasm_bindgen]
pub fn remez_curve(target: &str, degree: usize, points: usize) -> String {
    finish(remez_curve_value(target, degree, points))
}

fn pair_system(family: &str, interval: Interval) -> Result<FunctionSystem, String> {
    match family {
        "monomial" => FunctionSystem::monomial(2, interval),
        "t_t2" => FunctionSystem::polynomials(vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]], interval),
        "cos_sin" => FunctionSystem::custom(2, usize::MAX, interval, |j, t, k| {
            let phase = t + (j + k) as f64 * std::f64::consts::FRAC_PI_2;
            phase.cos()
        }),
        "gauss" => FunctionSystem::gauss(vec![-0.5, 0.5], interval),
        _ => return Err(format!("unknown family `{family}`")),
    }
    .map_err(|e| e.to_string())
}

pub fn determinant_sign_map_value(family: &str, a: f64, b: f64, resolution: usize) -> Result<Value, String> {
    let interval = Interval::new(a, b).map_err(|e| e.to_string())?;
    let sys = pair_system(family, interval)?;
    let n = resolution.max(2);
    let grid = interval.grid(n);
    let mut signs = Vec::with_capacity(n * n);
    for &t1 in &grid {
        for &t0 in &grid {
            if t0 < t1 {
                let knots = KnotSpec::simple(&[t0, t1]).map_err(|e| e.to_string())?;
                let r = collocation_determinant(&sys, &knots).map_err(|e| e.to_string())?;
                signs.push(Value::from(r.sign));
            } else {
                signs.push(Value::Null);
            }
        }
    }
    Ok(json!({ "resolution": n, "a": a, "b": b, "signs": signs }))
}

/// Sign of `det [u_i(t_j)]` for a two-function system on the grid `t0 < t1`;
/// row index is `t1`, column index `t0`, `null` below the diagonal.
/// Families: `monomial`, `t_t2`, `cos_sin`, `gauss`.
#[wasm_bindgen]
pub fn determinant_sign_map(family: &str, a: f64, b: f64, resolution: usize) -> String {
    finish(determinant_sign_map_value(family, a, b, resolution))
}

pub fn polyharmonic_field_value(order_n: usize, rho: f64, mode: usize, resolution: usize) -> Result<Value, String> {
    let cutoff = mode.max(1);
    let cfg = DiskConfig::new(order_n, cutoff, rho).map_err(|e| e.to_string())?;
    let mut cos = vec![vec![0.0; cutoff + 1]; order_n];
    let sin = vec![vec![0.0; cutoff + 1]; order_n];
    cos[0][mode] = 1.0;
    let data = FourierBoundaryData::from_real(&cos, &sin).map_err(|e| e.to_string())?;
    let coeffs = solve_dirichlet_disk(&cfg, &data).map_err(|e| e.to_string())?;
    let cert = uniqueness_certificate(&Geometry::Subdisk { order_n, cutoff, rho }).map_err(|e| e.to_string())?;
    let n = resolution.max(2);
    let mut values = Vec::with_capacity(n * n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let y = rho * (1.0 - 2.0 * i as f64 / (n - 1) as f64);
        for j in 0..n {
            let x = rho * (2.0 * j as f64 / (n - 1) as f64 - 1.0);
            let r = x.hypot(y);
            if r > rho {
                values.push(Value::Null);
                continue;
            }
            let u = eval_field(&coeffs, r, y.atan2(x), 0).map_err(|e| e.to_string())?;
            lo = lo.min(u);
            hi = hi.max(u);
            values.push(Value::from(u));
        }
    }
    Ok(json!({
        "resolution": n,
        "rho": rho,
        "values": values,
        "min": lo,
        "max": hi,
        "certificate_min": cert.global_min,
    }))
}

/// Field of the polyharmonic function of order `order_n` with
/// `u = cos(mode·θ)` and vanishing normal derivatives on the circle of
/// radius `rho`, sampled on a square grid (`null` outside the disk).
#[wasm_bindgen]
pub fn polyharmonic_field(order_n: usize, rho: f64, mode: usize, resolution: usize) -> String {
    finish(polyharmonic_field_value(order_n, rho, mode, resolution))
}
