//! Reference computations shared by the integration tests. Nothing here calls
//! into the library's linear algebra.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `Π_{i<j} (t_j − t_i)`.
pub fn vandermonde_product(ts: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..ts.len() {
        for i in 0..j {
            p *= ts[j] - ts[i];
        }
    }
    p
}

/// Confluent Vandermonde determinant for knots `t_i` of multiplicity `m_i`:
/// `Π_{i<j} (t_j − t_i)^{m_i m_j} · Π_i Π_{k<m_i} k!`.
pub fn confluent_vandermonde(knots: &[(f64, usize)]) -> f64 {
    let mut p = 1.0;
    for j in 0..knots.len() {
        for i in 0..j {
            p *= (knots[j].0 - knots[i].0).powi((knots[i].1 * knots[j].1) as i32);
        }
    }
    for &(_, m) in knots {
        for k in 0..m {
            p *= factorial(k);
        }
    }
    p
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Error-free pair arithmetic: values are `hi + lo`.
#[derive(Clone, Copy, Debug)]
pub struct Pair(pub f64, pub f64);

impl Pair {
    pub fn add(self, o: Pair) -> Pair {
        let s = self.0 + o.0;
        let v = s - self.0;
        let e = (self.0 - (s - v)) + (o.0 - v) + self.1 + o.1;
        let hi = s + e;
        Pair(hi, e - (hi - s))
    }

    pub fn neg(self) -> Pair {
        Pair(-self.0, -self.1)
    }

    pub fn mul(self, o: Pair) -> Pair {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let hi = p + e;
        Pair(hi, e - (hi - p))
    }

    /// `1 / (a + b)` with the sum formed exactly.
    pub fn recip_of_sum(a: f64, b: f64) -> Pair {
        let s = a + b;
        let v = s - a;
        let d = Pair(s, (a - (s - v)) + (b - v));
        let q1 = 1.0 / d.0;
        let r = Pair(1.0, 0.0).add(d.mul(Pair(q1, 0.0)).neg());
        let q2 = r.0 / d.0;
        Pair(q1, 0.0).add(Pair(q2, 0.0))
    }

    pub fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// Rule of Sarrus, in pair arithmetic.
pub fn det3(a: &[[Pair; 3]; 3]) -> f64 {
    let p = |i: usize, j: usize, k: usize| a[0][i].mul(a[1][j]).mul(a[2][k]);
    p(0, 1, 2)
        .add(p(1, 2, 0))
        .add(p(2, 0, 1))
        .add(p(2, 1, 0).neg())
        .add(p(0, 2, 1).neg())
        .add(p(1, 0, 2).neg())
        .value()
}

/// Closed-form Cauchy determinant `Π_{i<j}(s_j − s_i)(t_j − t_i) / Π_{i,j}(s_i + t_j)`.
/// A pure product, so it keeps full relative accuracy however small.
pub fn cauchy_det_closed(s: &[f64], t: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..s.len() {
        for i in 0..j {
            p *= (s[j] - s[i]) * (t[j] - t[i]);
        }
    }
    for &si in s {
        for &tj in t {
            p /= si + tj;
        }
    }
    p
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// `count` strictly increasing points in `[a, b]` at least `gap` apart.
pub fn separated_points(rng: &mut ChaCha8Rng, count: usize, a: f64, b: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut ts: Vec<f64> = (0..count).map(|_| rng.gen_range(a..=b)).collect();
        ts.sort_by(f64::total_cmp);
        if ts.windows(2).all(|w| w[1] - w[0] >= gap) {
            return ts;
        }
    }
}

/// Ascending-coefficient polynomial value.
pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Grid-search minimax of `f(t) − (c0 + c1 t + c2 t²)` on `[-1, 1]` over the
/// lattice `centre ± half_width` with `side` points per axis, the maximum
/// taken over the given samples.
pub fn lattice_minimax_quadratic(
    f_samples: &[(f64, f64)],
    centre: [f64; 3],
    half_width: f64,
    side: usize,
) -> f64 {
    let step = 2.0 * half_width / (side - 1) as f64;
    let axis = |c: f64| (0..side).map(move |i| c - half_width + i as f64 * step);
    let mut best = f64::INFINITY;
    for c2 in axis(centre[2]) {
        for c1 in axis(centre[1]) {
            // residual without the constant term, then the optimal constant on the lattice
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let resid: Vec<f64> = f_samples.iter().map(|&(t, ft)| ft - c1 * t - c2 * t * t).collect();
            for &r in &resid {
                lo = lo.min(r);
                hi = hi.max(r);
            }
            for c0 in axis(centre[0]) {
                let e = (hi - c0).max(c0 - lo);
                if e < best {
                    best = e;
                }
            }
        }
    }
    best
}
