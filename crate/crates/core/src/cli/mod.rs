//! The `chebsys` command-line front end.
//!
//! Each command reads one JSON config, writes `report.json` (plus CSV
//! artifacts) into the output directory and maps the outcome to an exit
//! code: 0 success, 2 mathematical negative, 1 usage or I/O error.

pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::approx::{remez, verify_alternation, AlternationCheck, InitialReference, RemezOptions, REFINE_TOL};
use crate::colloc::{certify_t_property, determinant_sweep, reduce_sweep, sharpen_witness, KnotMode, Verdict, KINK_EXCLUSION};
use crate::construct::{build_nested, NESTED_TOL};
use crate::error::Error;
use crate::interp::{dt_boundary_basis, dt_solve, hermite_residual, hermite_solve, DTData, HermiteData};
use crate::moments::{gauss_from_moments, HANKEL_PIVOT_FLOOR};
use crate::polyharmonic::{
    apply_laplacian, radial_mode_value, sample_polar, solve_concentric, solve_dirichlet_disk, uniqueness_certificate,
    AlmansiCoefficients, DiskConfig, FourierBoundaryData, Geometry, UniquenessVerdict,
};
use crate::system::{FunctionSystem, Interval, SpanElement};
use crate::SINGULAR_TOL;

use config::{ConfigError, GeometryDecl, InitialDecl};
use report::{emit_report, write_csv, Provenance, Report, Status, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Interpolate,
    Dt,
    Remez,
    Moments,
    Polyharmonic,
    NestedBuild,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Interpolate => "interpolate",
            Command::Dt => "dt",
            Command::Remez => "remez",
            Command::Moments => "moments",
            Command::Polyharmonic => "polyharmonic",
            Command::NestedBuild => "nested-build",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "chebsys", version, about = "Chebyshev systems: certification, interpolation, approximation, moments")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Reads `CHEBSYS_LOG` (quiet | info | debug); anything else means warnings only.
pub fn init_logging() {
    let level = match std::env::var("CHEBSYS_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Math(#[from] Error),
}

/// Result of a command before it is written out.
struct Outcome {
    status: Status,
    message: Option<String>,
    results: Value,
    tolerances: BTreeMap<String, f64>,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Self { status: Status::Ok, message: None, results, tolerances: BTreeMap::new() }
    }

    fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }
}

/// Runs one command; returns the process exit code.
pub fn run(args: &Args) -> u8 {
    match execute(args) {
        Ok((status, path)) => {
            log::info!("{} finished with status {status:?}; report at {}", args.command.name(), path.display());
            status.exit_code()
        }
        Err(e) => {
            eprintln!("chebsys {}: {e}", args.command.name());
            1
        }
    }
}

fn execute(args: &Args) -> Result<(Status, PathBuf), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let echo: Value = serde_json::from_str(&text).map_err(ConfigError::from)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out.display())))?;
    let out = args.out.as_path();
    let (outcome, config_seed) = match args.command {
        Command::Check => with_config(&text, |c: config::CheckConfig| (run_check(&c, args.seed, out), c.seed)),
        Command::Interpolate => with_config(&text, |c: config::InterpolateConfig| (run_interpolate(&c), c.seed)),
        Command::Dt => with_config(&text, |c: config::DtConfig| (run_dt(&c), c.seed)),
        Command::Remez => with_config(&text, |c: config::RemezConfig| (run_remez(&c, out), c.seed)),
        Command::Moments => with_config(&text, |c: config::MomentsConfig| (run_moments(&c), c.seed)),
        Command::Polyharmonic => {
            with_config(&text, |c: config::PolyharmonicConfig| (run_polyharmonic(&c, out), c.seed))
        }
        Command::NestedBuild => {
            with_config(&text, |c: config::NestedBuildConfig| (run_nested(&c, args.seed, out), c.seed))
        }
    }?;
    let outcome = match outcome {
        Ok(o) => o,
        Err(CliError::Math(e)) => match negative_status(&e) {
            Some(status) => Outcome { status, message: Some(e.to_string()), results: Value::Null, tolerances: BTreeMap::new() },
            None => return Err(CliError::Math(e)),
        },
        Err(e) => return Err(e),
    };
    let mut tolerances = outcome.tolerances;
    tolerances.insert("singular".into(), SINGULAR_TOL);
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: args.command.name().to_string(),
        config: echo,
        status: outcome.status,
        message: outcome.message,
        results: outcome.results,
        provenance: Provenance { seed: args.seed.or(config_seed).unwrap_or(0), tolerances },
    };
    let path = out.join("report.json");
    emit_report(&report, &path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok((report.status, path))
}

fn with_config<C: DeserializeOwned>(
    text: &str,
    f: impl FnOnce(C) -> (Result<Outcome, CliError>, Option<u64>),
) -> Result<(Result<Outcome, CliError>, Option<u64>), CliError> {
    let cfg: C = config::parse(text)?;
    Ok(f(cfg))
}

fn negative_status(e: &Error) -> Option<Status> {
    match e {
        Error::Singular { .. } => Some(Status::Singular),
        Error::NotPositiveDefinite { .. } => Some(Status::NotPositiveDefinite),
        _ => None,
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("cannot write {}: {e}", path.display()))
}

fn interval_or_domain(v: Option<[f64; 2]>, sys: &FunctionSystem) -> Result<Interval, CliError> {
    Ok(match v {
        Some(v) => config::interval_from("interval", v)?,
        None => sys.domain(),
    })
}

fn run_check(c: &config::CheckConfig, seed: Option<u64>, out: &Path) -> Result<Outcome, CliError> {
    let sys = c.system.build()?;
    let interval = interval_or_domain(c.interval, &sys)?;
    let seed = seed.or(c.seed).unwrap_or(0);
    let rows = determinant_sweep(&sys, &interval, c.mode, c.samples, seed)?;
    let result = sharpen_witness(&sys, &rows, reduce_sweep(&rows))?;
    let n = sys.order_count();
    let mut header: Vec<String> = (0..n).map(|i| format!("knot_{i}")).collect();
    header.extend(["determinant", "sign", "smallest_singular_value"].map(String::from));
    let path = out.join("sweep.csv");
    write_csv(
        &path,
        &header,
        rows.iter().flatten().map(|row| {
            let mut v = row.knots.expanded();
            v.extend([row.report.determinant, row.report.sign as f64, row.report.smallest_singular_value]);
            v
        }),
    )
    .map_err(io_err(&path))?;
    let status = match result.verdict {
        Verdict::CertifiedConsistent => Status::Ok,
        Verdict::Refuted => Status::Refuted,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    let results = serde_json::to_value(&result).expect("serializable");
    Ok(Outcome { status, ..Outcome::ok(results) }.tol("kink_exclusion", KINK_EXCLUSION))
}

fn span_json(u: &SpanElement) -> Value {
    json!(u.coefficients())
}

fn run_interpolate(c: &config::InterpolateConfig) -> Result<Outcome, CliError> {
    let sys = c.system.build()?;
    let data = HermiteData::from_pairs(c.knots.iter().map(|k| (k.t, k.values.clone())).collect())
        .map_err(|e| ConfigError::Invalid { field: "knots".into(), source: e })?;
    let u = hermite_solve(&sys, &data)?;
    let residual = hermite_residual(&u, &data)?;
    Ok(Outcome::ok(json!({ "coefficients": span_json(&u), "residual": residual })))
}

fn run_dt(c: &config::DtConfig) -> Result<Outcome, CliError> {
    let sys = c.system.build()?;
    let data = DTData::new(c.alpha, c.beta, c.left.clone(), c.right.clone())
        .map_err(|e| ConfigError::Invalid { field: "left/right".into(), source: e })?;
    let u = dt_solve(&sys, &data)?;
    let mut residual = 0.0f64;
    for k in 0..data.order() {
        residual = residual.max((u.eval(c.alpha, k)? - c.left[k]).abs());
        residual = residual.max((u.eval(c.beta, k)? - c.right[k]).abs());
    }
    let mut results = json!({ "coefficients": span_json(&u), "residual": residual });
    if c.basis {
        let (v, w) = dt_boundary_basis(&sys, c.alpha, c.beta)?;
        results["left_basis"] = json!(v.iter().map(span_json).collect::<Vec<_>>());
        results["right_basis"] = json!(w.iter().map(span_json).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(results))
}

fn run_remez(c: &config::RemezConfig, out: &Path) -> Result<Outcome, CliError> {
    let sys = c.system.build()?;
    let interval = interval_or_domain(c.interval, &sys)?;
    let mut options = RemezOptions::default();
    if let Some(t) = &c.tolerances {
        options.tol = t.remez.unwrap_or(options.tol);
        options.max_iter = t.max_iter.unwrap_or(options.max_iter);
    }
    if c.initial == Some(InitialDecl::Uniform) {
        options.initial = InitialReference::Uniform;
    }
    let f = |t: f64| c.target.eval(t);
    let best = remez(&sys, f, &interval, &options)?;
    let check = verify_alternation(&sys, f, &best.solution, &interval)?;
    let alternation = match &check {
        AlternationCheck::Certificate(cert) => json!({ "certified": true, "points": cert.points }),
        AlternationCheck::Refuted(r) => {
            let mut v = serde_json::to_value(r).expect("serializable");
            v["certified"] = json!(false);
            v
        }
    };
    let path = out.join("error_curve.csv");
    let grid = interval.grid(c.curve_points.max(2));
    let mut curve = Vec::with_capacity(grid.len());
    for t in grid {
        curve.push(vec![t, f(t) - best.solution.eval(t, 0)?]);
    }
    write_csv(&path, &["t".into(), "error".into()], curve).map_err(io_err(&path))?;
    let results = json!({
        "coefficients": span_json(&best.solution),
        "delta": best.delta,
        "points": best.points,
        "epsilon_sign": best.epsilon_sign,
        "iterations": best.iterations,
        "converged": best.converged,
        "levels": best.levels,
        "degenerate": best.degenerate,
        "alternation": alternation,
    });
    let status = if best.converged { Status::Ok } else { Status::NotConverged };
    Ok(Outcome { status, ..Outcome::ok(results) }
        .tol("remez", options.tol)
        .tol("max_iter", options.max_iter as f64)
        .tol("extremum_refine", REFINE_TOL))
}

fn run_moments(c: &config::MomentsConfig) -> Result<Outcome, CliError> {
    let interval = config::interval_from("interval", c.interval)?;
    if c.moments.len() != 2 * c.n {
        return Err(ConfigError::Other(format!(
            "n: {} nodes need exactly 2n = {} moments, got {}",
            c.n,
            2 * c.n,
            c.moments.len()
        ))
        .into());
    }
    let mu = gauss_from_moments(&c.moments, &interval)?;
    let reproduced = mu.power_moments(c.moments.len());
    let residual = reproduced.iter().zip(&c.moments).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Outcome::ok(json!({ "nodes": mu.nodes(), "weights": mu.weights(), "residual": residual }))
        .tol("hankel_pivot_floor", HANKEL_PIVOT_FLOOR))
}

fn boundary_data(c: &config::PolyharmonicConfig, rows: usize) -> Result<FourierBoundaryData, CliError> {
    if c.data.len() != rows {
        return Err(ConfigError::Other(format!("data: expected {rows} rows, got {}", c.data.len())).into());
    }
    let cutoff = c.mode_cutoff as i64;
    let mut table = vec![vec![Complex64::new(0.0, 0.0); 2 * c.mode_cutoff + 1]; rows];
    for (row, entries) in table.iter_mut().zip(&c.data) {
        for e in entries {
            if e.m.abs() > cutoff {
                return Err(ConfigError::Other(format!("data: mode {} exceeds M = {cutoff}", e.m)).into());
            }
            row[(e.m + cutoff) as usize] += Complex64::new(e.re, e.im);
        }
    }
    FourierBoundaryData::new(c.mode_cutoff, table).map_err(|e| ConfigError::Invalid { field: "data".into(), source: e }.into())
}

fn coefficients_json(a: &AlmansiCoefficients) -> Value {
    let cutoff = a.cutoff() as i64;
    let modes: Vec<Value> = a
        .table()
        .iter()
        .enumerate()
        .filter(|(_, row)| row.iter().any(|z| z.norm() != 0.0))
        .map(|(idx, row)| {
            json!({
                "m": idx as i64 - cutoff,
                "re": row.iter().map(|z| z.re).collect::<Vec<_>>(),
                "im": row.iter().map(|z| z.im).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!(modes)
}

fn run_polyharmonic(c: &config::PolyharmonicConfig, out: &Path) -> Result<Outcome, CliError> {
    let n = c.order_n;
    let (certificate, coeffs, data) = match &c.geometry {
        GeometryDecl::Subdisk { rho } => {
            let cfg = DiskConfig::new(n, c.mode_cutoff, *rho)
                .map_err(|e| ConfigError::Invalid { field: "geometry".into(), source: e })?;
            let data = boundary_data(c, n)?;
            let geometry = Geometry::Subdisk { order_n: n, cutoff: c.mode_cutoff, rho: *rho };
            let certificate = uniqueness_certificate(&geometry)?;
            (certificate, solve_dirichlet_disk(&cfg, &data), data)
        }
        GeometryDecl::Concentric { radii } => {
            if radii.len() != n {
                return Err(ConfigError::Other(format!("N: concentric geometry with {} radii needs N = {}", radii.len(), radii.len())).into());
            }
            let data = boundary_data(c, n)?;
            let geometry = Geometry::Concentric { radii: radii.clone(), cutoff: c.mode_cutoff };
            let certificate = uniqueness_certificate(&geometry)
                .map_err(|e| ConfigError::Invalid { field: "geometry".into(), source: e })?;
            (certificate, solve_concentric(radii, &data), data)
        }
    };
    let cert_json = serde_json::to_value(&certificate).expect("serializable");
    let coeffs = match coeffs {
        Ok(a) => a,
        Err(e) => match negative_status(&e) {
            Some(status) => {
                return Ok(Outcome {
                    status,
                    message: Some(e.to_string()),
                    results: json!({ "certificate": cert_json }),
                    tolerances: BTreeMap::new(),
                })
            }
            None => return Err(e.into()),
        },
    };
    let cutoff = c.mode_cutoff as i64;
    let mut residual = 0.0f64;
    let r_max = match &c.geometry {
        GeometryDecl::Subdisk { rho } => {
            for j in 0..n {
                for m in -cutoff..=cutoff {
                    residual = residual.max((radial_mode_value(&coeffs, *rho, m, j) - data.coefficient(j, m)).norm());
                }
            }
            *rho
        }
        GeometryDecl::Concentric { radii } => {
            for (j, &r) in radii.iter().enumerate() {
                for m in -cutoff..=cutoff {
                    residual = residual.max((radial_mode_value(&coeffs, r, m, 0) - data.coefficient(j, m)).norm());
                }
            }
            radii.iter().cloned().fold(0.0, f64::max)
        }
    };
    let mut lap = coeffs.clone();
    for _ in 0..n {
        lap = apply_laplacian(&lap);
    }
    if let Some(grid) = &c.field_grid {
        let path = out.join("field.csv");
        let samples = sample_polar(&coeffs, grid.nr.max(1), grid.ntheta.max(1), r_max);
        write_csv(&path, &["r".into(), "theta".into(), "value".into()], samples.into_iter().map(|(r, t, v)| vec![r, t, v]))
            .map_err(io_err(&path))?;
    }
    let status = match certificate.verdict {
        UniquenessVerdict::Unique => Status::Ok,
        UniquenessVerdict::Degenerate(_) => Status::Singular,
    };
    let results = json!({
        "coefficients": coefficients_json(&coeffs),
        "certificate": cert_json,
        "boundary_residual": residual,
        "polyharmonic_residual": lap.max_abs(),
        "real_data": data.is_real(1e-14),
    });
    Ok(Outcome { status, ..Outcome::ok(results) })
}

fn run_nested(c: &config::NestedBuildConfig, seed: Option<u64>, out: &Path) -> Result<Outcome, CliError> {
    let domain = config::interval_from("domain", c.domain)?;
    let sys = build_nested(config::build_chain(&c.weights, c.anchor, domain)?);
    let grid = domain.grid(c.grid.max(2));
    let n = sys.order_count();
    let mut table = Vec::with_capacity(grid.len());
    for &t in &grid {
        let mut row = vec![t];
        for j in 0..n {
            row.push(sys.eval(j, t, 0)?);
        }
        table.push(row);
    }
    let path = out.join("nested_table.csv");
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|j| format!("u_{j}")));
    write_csv(&path, &header, table.clone()).map_err(io_err(&path))?;
    let mut results = json!({
        "order_count": n,
        "smoothness": sys.smoothness(),
        "grid": grid,
        "values": table.iter().map(|r| r[1..].to_vec()).collect::<Vec<_>>(),
    });
    let mut status = Status::Ok;
    if let Some(samples) = c.certify_samples {
        let cert = certify_t_property(&sys, &domain, KnotMode::Confluent, samples, seed.or(c.seed).unwrap_or(0))?;
        status = match cert.verdict {
            Verdict::CertifiedConsistent => Status::Ok,
            Verdict::Refuted => Status::Refuted,
            Verdict::Inconclusive => Status::Inconclusive,
        };
        results["certification"] = serde_json::to_value(&cert).expect("serializable");
    }
    Ok(Outcome { status, ..Outcome::ok(results) }.tol("nested", NESTED_TOL))
}
