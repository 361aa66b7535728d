//! Collocation and confluent (Hermite) determinants, zero counting and
//! sampled certification of the T / ET property.
//!
//! The collocation matrix has one row per function `u_i` and one column per
//! condition. A knot `t_j` of multiplicity `m_j` contributes the `m_j`
//! columns `u_i(t_j), u_i'(t_j), …, u_i^{(m_j-1)}(t_j)` in that order.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::linalg::{relative_smallest_sv, singular_extremes};
use crate::system::{FunctionSystem, Interval, SpanElement};
use crate::SINGULAR_TOL;

/// Knots closer than this to a kink of the system are never sampled.
pub const KINK_EXCLUSION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub multiplicity: usize,
}

/// Strictly increasing knots with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotSpec {
    knots: Vec<Knot>,
}

impl KnotSpec {
    pub fn new(knots: Vec<Knot>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::MalformedKnots("no knots".into()));
        }
        if let Some(k) = knots.iter().find(|k| k.multiplicity == 0) {
            return Err(Error::MalformedKnots(format!("knot {} has multiplicity 0", k.t)));
        }
        if knots.iter().any(|k| !k.t.is_finite()) {
            return Err(Error::MalformedKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(Error::MalformedKnots("knots must be strictly increasing".into()));
        }
        Ok(Self { knots })
    }

    /// All multiplicities equal to one.
    pub fn simple(ts: &[f64]) -> Result<Self> {
        Self::new(ts.iter().map(|&t| Knot { t, multiplicity: 1 }).collect())
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn total_multiplicity(&self) -> usize {
        self.knots.iter().map(|k| k.multiplicity).sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.knots.iter().map(|k| k.multiplicity).max().unwrap_or(0)
    }

    /// Knots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.knots
            .iter()
            .flat_map(|k| std::iter::repeat(k.t).take(k.multiplicity))
            .collect()
    }

    /// `(t, derivative order)` for every column of the collocation matrix.
    pub fn conditions(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.knots.iter().flat_map(|k| (0..k.multiplicity).map(move |d| (k.t, d)))
    }

    pub(crate) fn validate_for(&self, system: &FunctionSystem) -> Result<()> {
        let total = self.total_multiplicity();
        if total != system.order_count() {
            return Err(Error::MalformedKnots(format!(
                "total multiplicity {total} differs from order_count {}",
                system.order_count()
            )));
        }
        let needed = self.max_multiplicity() - 1;
        if needed > system.smoothness() {
            return Err(Error::DerivativeOrder { order: needed, smoothness: system.smoothness() });
        }
        let dom = system.domain();
        if let Some(k) = self.knots.iter().find(|k| !dom.contains(k.t)) {
            return Err(Error::OutsideDomain { t: k.t, a: dom.a(), b: dom.b() });
        }
        Ok(())
    }
}

/// Confluent collocation matrix: rows are functions, columns are the knot
/// conditions in ascending derivative order per knot.
pub fn collocation_matrix(system: &FunctionSystem, knots: &KnotSpec) -> Result<DMatrix<f64>> {
    knots.validate_for(system)?;
    let n = system.order_count();
    let mut m = DMatrix::zeros(n, n);
    for (col, (t, d)) in knots.conditions().enumerate() {
        for i in 0..n {
            m[(i, col)] = system.eval(i, t, d)?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollocationReport {
    pub determinant: f64,
    /// −1, 0 or +1; 0 when the relative smallest singular value is at most
    /// [`SINGULAR_TOL`].
    pub sign: i8,
    pub smallest_singular_value: f64,
    /// Largest singular value.
    pub scale: f64,
}

impl CollocationReport {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let wide = m.row_iter().map(|r| r.iter().map(|&x| Dd::from(x)).collect()).collect();
        Self::from_parts(m, wide)
    }

    /// `wide` holds the same entries as `m`, possibly more accurately; the
    /// determinant is eliminated in double-double from it.
    fn from_parts(m: &DMatrix<f64>, wide: Vec<Vec<Dd>>) -> Self {
        let determinant = dd::determinant(wide);
        let (smin, smax) = singular_extremes(m);
        let sign = if relative_smallest_sv(smin, smax) <= SINGULAR_TOL || determinant == 0.0 {
            0
        } else if determinant > 0.0 {
            1
        } else {
            -1
        };
        Self { determinant, sign, smallest_singular_value: smin, scale: smax }
    }
}

pub fn collocation_determinant(system: &FunctionSystem, knots: &KnotSpec) -> Result<CollocationReport> {
    let m = collocation_matrix(system, knots)?;
    let n = system.order_count();
    let mut wide = vec![vec![Dd::default(); n]; n];
    for (col, (t, d)) in knots.conditions().enumerate() {
        for (i, row) in wide.iter_mut().enumerate() {
            row[col] = system.eval_dd(i, t, d)?;
        }
    }
    Ok(CollocationReport::from_parts(&m, wide))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnotMode {
    Simple,
    Confluent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedConsistent,
    Refuted,
    Inconclusive,
}

/// One sampled knot configuration and its determinant diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub knots: KnotSpec,
    pub report: CollocationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationResult {
    pub verdict: Verdict,
    pub samples_run: usize,
    pub witness: Option<KnotSpec>,
    pub witness_report: Option<CollocationReport>,
    pub min_abs_det: f64,
    pub common_sign: Option<i8>,
}

fn draw_knots(
    rng: &mut ChaCha8Rng,
    interval: &Interval,
    multiplicities: &[usize],
    kinks: &[f64],
) -> Option<KnotSpec> {
    for _ in 0..1000 {
        let mut ts: Vec<f64> = (0..multiplicities.len())
            .map(|_| rng.gen_range(interval.a()..=interval.b()))
            .collect();
        ts.sort_by(f64::total_cmp);
        if ts.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        if ts.iter().any(|t| kinks.iter().any(|s| (t - s).abs() < KINK_EXCLUSION)) {
            continue;
        }
        let knots = ts
            .into_iter()
            .zip(multiplicities)
            .map(|(t, &multiplicity)| Knot { t, multiplicity })
            .collect();
        return KnotSpec::new(knots).ok();
    }
    None
}

/// Random composition of `total` into positive parts.
fn random_multiplicities(rng: &mut ChaCha8Rng, total: usize) -> Vec<usize> {
    let parts = rng.gen_range(1..=total);
    // choose parts-1 cut points among the total-1 gaps
    let mut gaps: Vec<usize> = (1..total).collect();
    gaps.shuffle(rng);
    let mut cuts: Vec<usize> = gaps.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

fn check_certification_inputs(
    system: &FunctionSystem,
    interval: &Interval,
    mode: KnotMode,
    sample_count: usize,
) -> Result<()> {
    if sample_count == 0 {
        return Err(Error::InvalidParameters("sample_count must be ≥ 1".into()));
    }
    if !system.domain().contains_interval(interval) {
        return Err(Error::InvalidParameters(format!(
            "interval {interval} is not inside the system domain {}",
            system.domain()
        )));
    }
    let needed = system.order_count() - 1;
    if mode == KnotMode::Confluent && system.smoothness() < needed {
        return Err(Error::DerivativeOrder { order: needed, smoothness: system.smoothness() });
    }
    Ok(())
}

/// The knot configurations `certify_t_property` evaluates for a given seed.
/// `None` entries mark draws that could not avoid the system's kinks.
pub fn sample_knots(
    system: &FunctionSystem,
    interval: &Interval,
    mode: KnotMode,
    sample_count: usize,
    seed: u64,
) -> Vec<Option<KnotSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = system.order_count();
    (0..sample_count)
        .map(|_| {
            let mults = match mode {
                KnotMode::Simple => vec![1; n],
                KnotMode::Confluent => random_multiplicities(&mut rng, n),
            };
            draw_knots(&mut rng, interval, &mults, system.kinks())
        })
        .collect()
}

/// Determinant diagnostics for every sampled configuration, in sample order.
pub fn determinant_sweep(
    system: &FunctionSystem,
    interval: &Interval,
    mode: KnotMode,
    sample_count: usize,
    seed: u64,
) -> Result<Vec<Option<SweepRow>>> {
    check_certification_inputs(system, interval, mode, sample_count)?;
    sample_knots(system, interval, mode, sample_count, seed)
        .into_iter()
        .map(|knots| match knots {
            Some(knots) => {
                let report = collocation_determinant(system, &knots)?;
                Ok(Some(SweepRow { knots, report }))
            }
            None => Ok(None),
        })
        .collect()
}

/// Randomized check of unisolvence on `interval`.
///
/// `Refuted` means a sampled determinant vanished or disagreed in sign with
/// the first nonzero one; `CertifiedConsistent` only means no sample did.
pub fn certify_t_property(
    system: &FunctionSystem,
    interval: &Interval,
    mode: KnotMode,
    sample_count: usize,
    seed: u64,
) -> Result<CertificationResult> {
    let rows = determinant_sweep(system, interval, mode, sample_count, seed)?;
    sharpen_witness(system, &rows, reduce_sweep(&rows))
}

/// Replaces a sign-flip witness by a configuration on the segment between
/// the reference sample and the flipped one at which the determinant
/// vanishes numerically, when both share a multiplicity pattern. Ordered
/// knot tuples stay ordered along the segment.
pub fn sharpen_witness(
    system: &FunctionSystem,
    rows: &[Option<SweepRow>],
    result: CertificationResult,
) -> Result<CertificationResult> {
    let (Some(flipped), Some(report), Some(common)) = (&result.witness, result.witness_report, result.common_sign)
    else {
        return Ok(result);
    };
    if report.sign == 0 {
        return Ok(result);
    }
    let Some(reference) = rows
        .iter()
        .flatten()
        .find(|r| r.report.sign == common && r.report.determinant.is_finite())
    else {
        return Ok(result);
    };
    let pattern = |k: &KnotSpec| k.knots().iter().map(|k| k.multiplicity).collect::<Vec<_>>();
    if pattern(&reference.knots) != pattern(flipped) {
        return Ok(result);
    }
    let at = |lambda: f64| -> Result<(KnotSpec, CollocationReport)> {
        let knots = reference
            .knots
            .knots()
            .iter()
            .zip(flipped.knots())
            .map(|(a, b)| Knot { t: a.t + lambda * (b.t - a.t), multiplicity: a.multiplicity })
            .collect();
        let knots = KnotSpec::new(knots)?;
        let report = collocation_determinant(system, &knots)?;
        Ok((knots, report))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = (flipped.clone(), report);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let Ok((knots, r)) = at(mid) else { break };
        if !r.determinant.is_finite() {
            break;
        }
        if r.sign == 0 {
            best = (knots, r);
            break;
        }
        if r.sign == common {
            lo = mid;
        } else {
            hi = mid;
            best = (knots, r);
        }
    }
    Ok(CertificationResult { witness: Some(best.0), witness_report: Some(best.1), ..result })
}

/// Deterministic reduction of a sweep into a verdict.
pub fn reduce_sweep(rows: &[Option<SweepRow>]) -> CertificationResult {
    let mut common_sign = None;
    let mut min_abs_det = f64::INFINITY;
    let mut inconclusive = false;
    for (i, row) in rows.iter().enumerate() {
        let Some(row) = row else {
            inconclusive = true;
            continue;
        };
        let r = row.report;
        if !r.determinant.is_finite() {
            inconclusive = true;
            continue;
        }
        min_abs_det = min_abs_det.min(r.determinant.abs());
        let disagrees = match (r.sign, common_sign) {
            (0, _) => true,
            (s, None) => {
                common_sign = Some(s);
                false
            }
            (s, Some(c)) => s != c,
        };
        if disagrees {
            return CertificationResult {
                verdict: Verdict::Refuted,
                samples_run: i + 1,
                witness: Some(row.knots.clone()),
                witness_report: Some(r),
                min_abs_det,
                common_sign,
            };
        }
    }
    let verdict = if inconclusive || common_sign.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::CertifiedConsistent
    };
    CertificationResult {
        verdict,
        samples_run: rows.len(),
        witness: None,
        witness_report: None,
        min_abs_det: if min_abs_det.is_finite() { min_abs_det } else { 0.0 },
        common_sign,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub t: f64,
    /// `|u'(t)| ≤ 1e-8` at the root.
    pub multiple: bool,
}

/// Result of [`count_zeros`]. Zeros closer together than the grid spacing
/// may be missed; a double root is only found when it lies on a grid point
/// or produces a local minimum of `|u|` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub zeros: Vec<Zero>,
    pub identically_zero: bool,
}

impl ZeroCount {
    /// Number of distinct zeros, or `None` for the zero element.
    pub fn count(&self) -> Option<usize> {
        (!self.identically_zero).then_some(self.zeros.len())
    }

    /// Zeros counted with multiplicity, flagged zeros counting twice.
    pub fn count_with_multiplicity(&self) -> Option<usize> {
        (!self.identically_zero)
            .then(|| self.zeros.iter().map(|z| if z.multiple { 2 } else { 1 }).sum())
    }
}

const ROOT_TOL: f64 = 1e-12;
const MULTIPLE_ROOT_SLOPE: f64 = 1e-8;

fn bisect(u: &SpanElement, mut lo: f64, mut hi: f64, flo: f64) -> Result<f64> {
    let mut slo = flo.signum();
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = u.eval(mid, 0)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == slo {
            lo = mid;
            slo = fm.signum();
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub(crate) fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn slope(u: &SpanElement, t: f64, interval: &Interval) -> Result<f64> {
    if u.system().smoothness() >= 1 {
        return u.eval(t, 1);
    }
    let h = 1e-6 * interval.width();
    let lo = (t - h).max(interval.a());
    let hi = (t + h).min(interval.b());
    Ok((u.eval(hi, 0)? - u.eval(lo, 0)?) / (hi - lo))
}

/// Zeros of `u` on `interval` from sign changes and touching minima on a
/// uniform grid of `grid_size` points, refined to `1e-12` in `t`.
pub fn count_zeros(u: &SpanElement, interval: &Interval, grid_size: usize) -> Result<ZeroCount> {
    if grid_size < 2 {
        return Err(Error::InvalidParameters("grid_size must be ≥ 2".into()));
    }
    if u.is_zero() {
        return Ok(ZeroCount { zeros: vec![], identically_zero: true });
    }
    let ts = interval.grid(grid_size);
    let vs = ts.iter().map(|&t| u.eval(t, 0)).collect::<Result<Vec<_>>>()?;
    let scale = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(ZeroCount { zeros: vec![], identically_zero: true });
    }
    let touch_tol = 1e-10 * (1.0 + scale);
    let mut roots = Vec::new();
    for i in 0..ts.len() {
        if vs[i] == 0.0 {
            roots.push(ts[i]);
            continue;
        }
        if i + 1 < ts.len() && vs[i + 1] != 0.0 && vs[i].signum() != vs[i + 1].signum() {
            roots.push(bisect(u, ts[i], ts[i + 1], vs[i])?);
        }
        // touching zero: interior local minimum of |u| without a sign change
        if i > 0 && i + 1 < ts.len() {
            let (l, c, r) = (vs[i - 1], vs[i], vs[i + 1]);
            if l.signum() == c.signum()
                && r.signum() == c.signum()
                && c.abs() <= l.abs()
                && c.abs() < r.abs()
            {
                let t = golden_min(
                    |t| u.eval(t, 0).map(f64::abs).unwrap_or(f64::INFINITY),
                    ts[i - 1],
                    ts[i + 1],
                    ROOT_TOL,
                );
                if u.eval(t, 0)?.abs() <= touch_tol {
                    roots.push(t);
                }
            }
        }
    }
    let zeros = roots
        .into_iter()
        .map(|t| Ok(Zero { t, multiple: slope(u, t, interval)?.abs() <= MULTIPLE_ROOT_SLOPE }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZeroCount { zeros, identically_zero: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn matrix_layout_examples() {
        let lin = FunctionSystem::monomial(2, iv(0.0, 1.0)).unwrap();
        let m = collocation_matrix(&lin, &KnotSpec::simple(&[0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));

        let quad = FunctionSystem::monomial(3, iv(0.0, 1.0)).unwrap();
        let knots = KnotSpec::new(vec![
            Knot { t: 0.0, multiplicity: 2 },
            Knot { t: 1.0, multiplicity: 1 },
        ])
        .unwrap();
        let m = collocation_matrix(&quad, &knots).unwrap();
        assert_eq!(
            m,
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0])
        );

        let wronskian = KnotSpec::new(vec![Knot { t: 0.0, multiplicity: 3 }]).unwrap();
        let r = collocation_determinant(&quad, &wronskian).unwrap();
        assert_relative_eq!(r.determinant, 2.0, max_relative = 1e-14);
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn determinant_examples() {
        let quad = FunctionSystem::monomial(3, iv(0.0, 2.0)).unwrap();
        let r = collocation_determinant(&quad, &KnotSpec::simple(&[0.0, 1.0, 2.0]).unwrap()).unwrap();
        assert_relative_eq!(r.determinant, 2.0, max_relative = 1e-13);

        let cauchy = FunctionSystem::cauchy(vec![1.0, 2.0], iv(0.0, 1.0)).unwrap();
        let r = collocation_determinant(&cauchy, &KnotSpec::simple(&[0.0, 1.0]).unwrap()).unwrap();
        assert_relative_eq!(r.determinant, 1.0 / 12.0, max_relative = 1e-14);

        let one = FunctionSystem::monomial(1, iv(0.0, 1.0)).unwrap();
        let r = collocation_determinant(&one, &KnotSpec::simple(&[0.0]).unwrap()).unwrap();
        assert_eq!(r.determinant, 1.0);
    }

    #[test]
    fn knot_validation() {
        assert!(KnotSpec::simple(&[0.5, 0.5]).is_err());
        assert!(KnotSpec::new(vec![Knot { t: 0.0, multiplicity: 0 }]).is_err());
        let quad = FunctionSystem::monomial(3, iv(0.0, 1.0)).unwrap();
        assert!(collocation_matrix(&quad, &KnotSpec::simple(&[0.0, 1.0]).unwrap()).is_err());
        let green = FunctionSystem::green_unit(vec![0.3, 0.6, 0.9], iv(0.0, 1.0)).unwrap();
        let triple = KnotSpec::new(vec![Knot { t: 0.5, multiplicity: 3 }]).unwrap();
        assert!(matches!(
            collocation_matrix(&green, &triple),
            Err(Error::DerivativeOrder { .. })
        ));
    }

    #[test]
    fn certification_examples() {
        let mono = FunctionSystem::monomial(4, iv(0.0, 1.0)).unwrap();
        let r = certify_t_property(&mono, &iv(0.0, 1.0), KnotMode::Simple, 500, 7).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedConsistent);
        assert_eq!(r.common_sign, Some(1));
        assert!(r.min_abs_det > 0.0);

        let lin = FunctionSystem::monomial(2, iv(0.0, 1.0)).unwrap();
        let r = certify_t_property(&lin, &iv(0.0, 1.0), KnotMode::Confluent, 200, 3).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedConsistent);
    }

    #[test]
    fn certification_refutes_t_and_t_squared() {
        let sys = FunctionSystem::polynomials(vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]], iv(-1.0, 1.0))
            .unwrap();
        for seed in 0..50 {
            let r = certify_t_property(&sys, &iv(-1.0, 1.0), KnotMode::Simple, 200, seed).unwrap();
            assert_eq!(r.verdict, Verdict::Refuted);
            assert_eq!(r.witness_report.unwrap().sign, 0);
            let w = r.witness.unwrap().expanded();
            // det = t0 t1 (t1 - t0) vanishes only when a knot sits at 0
            assert!(w[0].abs() < 1e-9 || w[1].abs() < 1e-9, "seed {seed}: witness {w:?}");
        }
    }

    #[test]
    fn certification_is_deterministic_per_seed() {
        let g = FunctionSystem::gauss(vec![0.1, 0.4, 0.9], iv(-1.0, 2.0)).unwrap();
        let a = determinant_sweep(&g, &iv(-1.0, 2.0), KnotMode::Confluent, 50, 99).unwrap();
        let b = determinant_sweep(&g, &iv(-1.0, 2.0), KnotMode::Confluent, 50, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn green_samples_avoid_kinks() {
        let green = FunctionSystem::green_unit(vec![0.25, 0.5, 0.75], iv(0.0, 1.0)).unwrap();
        let samples = sample_knots(&green, &iv(0.05, 0.95), KnotMode::Simple, 300, 1);
        for k in samples.into_iter().flatten() {
            for t in k.expanded() {
                assert!(green.kinks().iter().all(|s| (t - s).abs() >= KINK_EXCLUSION));
            }
        }
    }

    #[test]
    fn certification_input_errors() {
        let mono = FunctionSystem::monomial(3, iv(0.0, 1.0)).unwrap();
        assert!(certify_t_property(&mono, &iv(0.0, 1.0), KnotMode::Simple, 0, 1).is_err());
        assert!(certify_t_property(&mono, &iv(0.0, 2.0), KnotMode::Simple, 5, 1).is_err());
        let green = FunctionSystem::green_unit(vec![0.3, 0.6, 0.9], iv(0.0, 1.0)).unwrap();
        assert!(certify_t_property(&green, &iv(0.0, 1.0), KnotMode::Confluent, 5, 1).is_err());
    }

    #[test]
    fn multiplicity_compositions_sum_to_total() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for total in 1..7 {
            for _ in 0..50 {
                let m = random_multiplicities(&mut rng, total);
                assert_eq!(m.iter().sum::<usize>(), total);
                assert!(m.iter().all(|&x| x >= 1));
            }
        }
    }

    #[test]
    fn zero_count_examples() {
        let d = iv(-1.0, 1.0);
        let quad = FunctionSystem::monomial(3, d).unwrap();
        let u = SpanElement::new(quad.clone(), vec![-0.25, 0.0, 1.0]).unwrap();
        let z = count_zeros(&u, &iv(0.0, 1.0), 101).unwrap();
        assert_eq!(z.count(), Some(1));
        assert!((z.zeros[0].t - 0.5).abs() < 1e-11);
        assert!(!z.zeros[0].multiple);

        let z = count_zeros(&SpanElement::zero(quad.clone()), &d, 11).unwrap();
        assert!(z.identically_zero);
        assert_eq!(z.count(), None);

        let sq = SpanElement::new(quad.clone(), vec![0.0, 0.0, 1.0]).unwrap();
        let z = count_zeros(&sq, &d, 1001).unwrap();
        assert_eq!(z.count(), Some(1));
        assert!(z.zeros[0].t.abs() < 1e-9);
        assert!(z.zeros[0].multiple);

        // touching zero off the grid: (t - 0.3)^2
        let off = SpanElement::new(quad, vec![0.09, -0.6, 1.0]).unwrap();
        let z = count_zeros(&off, &d, 100).unwrap();
        assert_eq!(z.count(), Some(1));
        assert!(z.zeros[0].multiple);
        assert_eq!(z.count_with_multiplicity(), Some(2));
    }
}
