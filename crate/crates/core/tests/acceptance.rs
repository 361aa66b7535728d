//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use chebsys::approx::{remez, InitialReference, RemezOptions};
use chebsys::colloc::{certify_t_property, collocation_determinant, collocation_matrix, KnotMode, KnotSpec, Verdict};
use chebsys::construct::{build_nested, Weight, WeightChain};
use chebsys::interp::{dt_boundary_basis, dt_solve, DTData};
use chebsys::moments::{gauss_from_moments, verify_measure, AtomicMeasure, MomentData};
use chebsys::polyharmonic::{
    apply_laplacian, concentric_mode_matrix, radial_mode_value, solve_concentric, solve_dirichlet_disk,
    uniqueness_certificate, DiskConfig, FourierBoundaryData, Geometry, UniquenessVerdict,
};
use chebsys::{FunctionSystem, Interval};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn vandermonde_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let sys = FunctionSystem::monomial(n, iv(-1.0, 1.0)).unwrap();
        for _ in 0..100 {
            let ts = separated_points(&mut rng, n, -1.0, 1.0, 0.0);
            let det = collocation_determinant(&sys, &KnotSpec::simple(&ts).unwrap()).unwrap().determinant;
            let err = rel_err(det, vandermonde_product(&ts));
            ensure(err <= 1e-10, || format!("order {n}, knots {ts:?}: relative error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn cauchy_determinants() -> Outcome {
    let s = [1.0, 2.0, 3.0];
    let sys = FunctionSystem::cauchy(s.to_vec(), iv(0.0, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut signs = Vec::new();
    for _ in 0..100 {
        let ts = separated_points(&mut rng, 3, 0.1, 0.9, 0.0);
        let r = collocation_determinant(&sys, &KnotSpec::simple(&ts).unwrap()).unwrap();
        let mut m = [[Pair(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = Pair::recip_of_sum(s[i], ts[j]);
            }
        }
        let err = rel_err(r.determinant, det3(&m));
        ensure(err <= 1e-10, || format!("knots {ts:?}: relative error {err:e}"))?;
        worst = worst.max(err);
        signs.push(r.sign);
    }
    ensure(signs[0] != 0 && signs.iter().all(|&s| s == signs[0]), || format!("signs differ: {signs:?}"))?;
    Ok(format!("worst relative error {worst:.2e}, common sign {}", signs[0]))
}

fn sign_flip_refutation() -> Outcome {
    let sys = FunctionSystem::polynomials(vec![vec![0.0, 1.0], vec![0.0, 0.0, 1.0]], iv(-1.0, 1.0)).unwrap();
    for seed in 0..25 {
        let r = certify_t_property(&sys, &iv(-1.0, 1.0), KnotMode::Simple, 200, seed).unwrap();
        ensure(r.verdict == Verdict::Refuted, || format!("seed {seed}: verdict {:?}", r.verdict))?;
        let w = r.witness.as_ref().ok_or("refuted without witness")?.expanded();
        let straddles = w[0] <= 0.0 && w[1] >= 0.0;
        let hits = w.iter().any(|t| t.abs() <= 1e-9);
        ensure(straddles || hits, || format!("seed {seed}: witness {w:?} neither straddles nor hits 0"))?;
    }
    Ok("25 seeds refuted, witnesses at 0".into())
}

fn et_construction() -> Outcome {
    let domain = iv(0.0, 1.0);
    let sys = build_nested(WeightChain::new(vec![Weight::Const(1.0); 4], 0.0, domain).unwrap());
    let mut worst = 0.0f64;
    for t in domain.grid(20) {
        let err = (sys.eval(3, t, 0).unwrap() - t.powi(3) / 6.0).abs();
        ensure(err <= 1e-10, || format!("u_3({t}) off by {err:e}"))?;
        worst = worst.max(err);
    }
    let cert = certify_t_property(&sys, &domain, KnotMode::Confluent, 200, 4).unwrap();
    ensure(cert.verdict == Verdict::CertifiedConsistent, || format!("confluent verdict {:?}", cert.verdict))?;
    Ok(format!("max |u_3 − t³/6| {worst:.2e}, confluent certification passed"))
}

fn hermite_and_dt() -> Outcome {
    let cubic = FunctionSystem::monomial(4, iv(-1.0, 2.0)).unwrap();
    let u = dt_solve(&cubic, &DTData::new(0.0, 1.0, vec![0.0, 0.0], vec![1.0, 0.0]).unwrap()).unwrap();
    let want = [0.0, 0.0, 3.0, -2.0];
    let err = u.coefficients().iter().zip(want).map(|(c, w)| (c - w).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-9, || format!("Hermite cubic coefficients {:?}", u.coefficients()))?;
    let mut worst = 0.0f64;
    for (alpha, beta) in [(0.0, 1.0), (-1.0, 2.0), (0.25, 0.5)] {
        let (v, w) = dt_boundary_basis(&cubic, alpha, beta).unwrap();
        let basis: Vec<_> = v.iter().chain(&w).collect();
        for (row, b) in basis.iter().enumerate() {
            let data = [b.eval(alpha, 0), b.eval(alpha, 1), b.eval(beta, 0), b.eval(beta, 1)];
            for (col, x) in data.into_iter().enumerate() {
                let e = (x.unwrap() - if row == col { 1.0 } else { 0.0 }).abs();
                ensure(e <= 1e-10, || format!("[{alpha}, {beta}] entry ({row}, {col}) off by {e:e}"))?;
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("coefficient error {err:.1e}, boundary matrix error {worst:.1e}"))
}

fn nondecreasing(levels: &[f64]) -> bool {
    levels.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12))
}

fn remez_square() -> Outcome {
    let sys = FunctionSystem::monomial(2, iv(-1.0, 1.0)).unwrap();
    let r = remez(&sys, |t| t * t, &iv(-1.0, 1.0), &RemezOptions::default()).unwrap();
    ensure((r.delta - 0.5).abs() <= 1e-8, || format!("delta {}", r.delta))?;
    for (p, want) in r.points.iter().zip([-1.0, 0.0, 1.0]) {
        ensure((p - want).abs() <= 1e-6, || format!("points {:?}", r.points))?;
    }
    ensure(r.iterations <= 10, || format!("{} iterations", r.iterations))?;
    ensure(nondecreasing(&r.levels), || format!("levels {:?}", r.levels))?;
    let quartic = FunctionSystem::monomial(5, iv(-1.0, 1.0)).unwrap();
    let targets: [fn(f64) -> f64; 3] = [f64::abs, f64::exp, |t| 1.0 / (1.0 + 25.0 * t * t)];
    for f in targets {
        for initial in [InitialReference::Chebyshev, InitialReference::Uniform] {
            let opts = RemezOptions { initial, ..RemezOptions::default() };
            let r = remez(&quartic, f, &iv(-1.0, 1.0), &opts).unwrap();
            ensure(nondecreasing(&r.levels), || format!("levels {:?}", r.levels))?;
        }
    }
    Ok(format!("delta {}, {} iteration(s), levels monotone on 7 runs", r.delta, r.iterations))
}

fn haar_uniqueness() -> Outcome {
    let sys = FunctionSystem::monomial(3, iv(-1.0, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let (a, b, c) = (rng.gen_range(-2.0..2.0), rng.gen_range(0.5..3.0), rng.gen_range(-1.0..1.0));
        let f = move |t: f64| match k % 4 {
            0 => a * (b * t).exp(),
            1 => (b * t + c).sin(),
            2 => 1.0 / (1.0 + b * (t - c * 0.5).powi(2)),
            _ => a * t.powi(3) + (b * t).cos(),
        };
        let run = |initial| {
            remez(&sys, f, &iv(-1.0, 1.0), &RemezOptions { initial, ..RemezOptions::default() }).unwrap()
        };
        let (p, q) = (run(InitialReference::Chebyshev), run(InitialReference::Uniform));
        ensure(p.converged && q.converged, || format!("target {k} did not converge"))?;
        let d = p
            .solution
            .coefficients()
            .iter()
            .zip(q.solution.coefficients())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        ensure(d <= 1e-6, || format!("target {k}: coefficient distance {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("20 targets, max coefficient distance {worst:.2e}"))
}

fn moments() -> Outcome {
    let unit = iv(-1.0, 1.0);
    let mu = gauss_from_moments(&[2.0, 0.0, 2.0 / 3.0, 0.0], &unit).unwrap();
    let x = 1.0 / 3f64.sqrt();
    for (got, want) in mu.nodes().iter().zip([-x, x]) {
        ensure((got - want).abs() <= 1e-9, || format!("nodes {:?}", mu.nodes()))?;
    }
    for w in mu.weights() {
        ensure((w - 1.0).abs() <= 1e-9, || format!("weights {:?}", mu.weights()))?;
    }
    let data = MomentData::new(FunctionSystem::monomial(4, unit).unwrap(), vec![2.0, 0.0, 2.0 / 3.0, 0.0]).unwrap();
    let residual = verify_measure(&data, &mu).unwrap();
    ensure(residual <= 1e-9, || format!("verify residual {residual:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for trial in 0..60 {
        let n = 1 + trial % 6;
        let atoms = n + rng.gen_range(0..4);
        let nodes = separated_points(&mut rng, atoms, -1.0, 1.0, 0.05);
        let weights: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.1..1.0)).collect();
        let source = AtomicMeasure::new(nodes, weights).unwrap();
        let c = source.power_moments(2 * n);
        let rule = gauss_from_moments(&c, &unit).map_err(|e| format!("n = {n}: {e}"))?;
        for (k, ck) in c.iter().enumerate() {
            let got = rule.integrate(|t| t.powi(k as i32));
            let scale = source.integrate(|t| t.abs().powi(k as i32));
            let err = (got - ck).abs() / scale;
            ensure(err <= 1e-8, || format!("n = {n}, moment {k}: relative error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("Legendre rule exact, 60 random measures, worst relative moment error {worst:.2e}"))
}

fn random_real_data(rng: &mut ChaCha8Rng, rows: usize, cutoff: usize) -> FourierBoundaryData {
    let table = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..rows).map(|_| (0..=cutoff).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
    };
    let cos = table(rng);
    let sin = table(rng);
    FourierBoundaryData::from_real(&cos, &sin).unwrap()
}

fn data_scale(d: &FourierBoundaryData) -> f64 {
    d.rows().iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn polyharmonic_annihilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cutoff = 16;
    let mut worst_lap = 0.0f64;
    let mut worst_bdry = 0.0f64;
    for n in 1..=4 {
        for rho in [0.5, 1.0] {
            let data = random_real_data(&mut rng, n, cutoff);
            let scale = data_scale(&data);
            let coeffs = solve_dirichlet_disk(&DiskConfig::new(n, cutoff, rho).unwrap(), &data).unwrap();
            let mut lap = coeffs.clone();
            for _ in 0..n {
                lap = apply_laplacian(&lap);
            }
            let l = lap.max_abs() / scale;
            ensure(l <= 1e-12, || format!("N = {n}: Δ^N residual {l:e}"))?;
            worst_lap = worst_lap.max(l);
            for j in 0..n {
                for m in -(cutoff as i64)..=cutoff as i64 {
                    let e = (radial_mode_value(&coeffs, rho, m, j) - data.coefficient(j, m)).norm() / scale;
                    ensure(e <= 1e-10, || format!("N = {n}, ρ = {rho}, j = {j}, m = {m}: boundary error {e:e}"))?;
                    worst_bdry = worst_bdry.max(e);
                }
            }
        }
    }
    Ok(format!("Δ^N residual {worst_lap:.1e}, boundary error {worst_bdry:.2e}"))
}

fn uniqueness_certificates() -> Outcome {
    let cutoff = 32;
    let mut smallest = f64::INFINITY;
    for n in 1..=4 {
        for rho in [0.25, 0.5, 1.0] {
            let cert = uniqueness_certificate(&Geometry::Subdisk { order_n: n, cutoff, rho }).unwrap();
            ensure(cert.verdict == UniquenessVerdict::Unique, || format!("subdisk N = {n}, ρ = {rho}: {cert:?}"))?;
            ensure(cert.per_mode.len() == cutoff + 1, || "per-mode length".into())?;
            smallest = smallest.min(cert.global_min);
            let zero = FourierBoundaryData::zeros(n, cutoff).unwrap();
            let a = solve_dirichlet_disk(&DiskConfig::new(n, cutoff, rho).unwrap(), &zero).unwrap();
            ensure(a.max_abs() <= 1e-12, || format!("homogeneous subdisk solve {:e}", a.max_abs()))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..12 {
        let n = 1 + trial % 4;
        let radii = separated_points(&mut rng, n, 0.2, 1.0, 0.05);
        let cert = uniqueness_certificate(&Geometry::Concentric { radii: radii.clone(), cutoff }).unwrap();
        ensure(cert.verdict == UniquenessVerdict::Unique, || format!("concentric {radii:?}: {cert:?}"))?;
        smallest = smallest.min(cert.global_min);
        let a = solve_concentric(&radii, &FourierBoundaryData::zeros(n, cutoff).unwrap()).unwrap();
        ensure(a.max_abs() <= 1e-12, || format!("homogeneous concentric solve {:e}", a.max_abs()))?;
    }
    Ok(format!("all unique, smallest relative singular value {smallest:.2e}"))
}

fn bridge_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let radii = separated_points(&mut rng, n, 0.1, 1.0, 0.01);
        for m in 0..=8usize {
            let exponents: Vec<f64> = (0..n).map(|k| (m + 2 * k) as f64).collect();
            let muntz = FunctionSystem::muntz(exponents, iv(0.1, 1.0)).unwrap();
            let colloc = collocation_matrix(&muntz, &KnotSpec::simple(&radii).unwrap()).unwrap();
            let conc = concentric_mode_matrix(m, &radii);
            ensure(colloc.shape() == conc.shape(), || "shape mismatch".into())?;
            let d = (colloc - conc).abs().max();
            ensure(d <= 1e-14, || format!("N = {n}, m = {m}: entry difference {d:e}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("max entry difference {worst:.1e}"))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_chebsys");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let good = write(
        "good.json",
        r#"{"system":{"family":"monomial","params":{"count":4},"domain":[-1,1]},"samples":300,"seed":7}"#,
    );
    let refuted = write(
        "refuted.json",
        r#"{"system":{"family":"custom","params":{"polynomials":[[0,1],[0,0,1]]},"domain":[-1,1]},"samples":200}"#,
    );
    let malformed = write("malformed.json", r#"{"system":{"family":"monomial","params":{"count":4}}}"#);
    let run = |cfg: &std::path::Path, out: &str| {
        let out = dir.path().join(out);
        let status = Command::new(bin).args(["check", "--config"]).arg(cfg).arg("--out").arg(&out).output().unwrap();
        (status.status.code(), out, String::from_utf8_lossy(&status.stderr).into_owned())
    };
    let (c1, o1, _) = run(&good, "a");
    let (c2, o2, _) = run(&good, "b");
    ensure(c1 == Some(0) && c2 == Some(0), || format!("success exit codes {c1:?} {c2:?}"))?;
    for file in ["report.json", "sweep.csv"] {
        let x = std::fs::read(o1.join(file)).map_err(|e| e.to_string())?;
        let y = std::fs::read(o2.join(file)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{file} differs between runs"))?;
    }
    let (c3, o3, _) = run(&refuted, "c");
    ensure(c3 == Some(2), || format!("refutation exit code {c3:?}"))?;
    ensure(o3.join("report.json").exists(), || "refutation report missing".into())?;
    let (c4, _, err) = run(&malformed, "d");
    ensure(c4 == Some(1), || format!("malformed exit code {c4:?}"))?;
    ensure(err.contains("domain"), || format!("message does not cite the field: {err}"))?;
    Ok("byte-identical reports; exit codes 0 / 2 / 1".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Vandermonde oracle", vandermonde_oracle),
        ("Cauchy-kernel determinants", cauchy_determinants),
        ("sign-flip refutation", sign_flip_refutation),
        ("ET construction", et_construction),
        ("Hermite / DT", hermite_and_dt),
        ("Remez on t²", remez_square),
        ("Haar uniqueness", haar_uniqueness),
        ("moments", moments),
        ("polyharmonic annihilation", polyharmonic_annihilation),
        ("uniqueness certificates", uniqueness_certificates),
        ("bridge identity", bridge_identity),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
