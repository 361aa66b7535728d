//! Declarative JSON configs. Every object is parsed strictly: unknown keys
//! are errors.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colloc::KnotMode;
use crate::construct::{build_nested, Weight, WeightChain};
use crate::error::Error;
use crate::system::{FunctionSystem, Interval};

/// `{ "family": …, "params": {…}, "domain": [a, b] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDecl {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    pub domain: [f64; 2],
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountParams {
    count: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentParams {
    exponents: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CentreParams {
    s: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NestedParams {
    weights: Vec<WeightDecl>,
    anchor: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomParams {
    polynomials: Vec<Vec<f64>>,
}

/// A weight is either a bare coefficient list or a named positive primitive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightDecl {
    Coefficients(Vec<f64>),
    Named(NamedWeight),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedWeight {
    Const { value: f64 },
    Exp {
        #[serde(default = "one")]
        scale: f64,
        rate: f64,
    },
    Affine { intercept: f64, slope: f64 },
    Polynomial { coefficients: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

impl WeightDecl {
    pub fn to_weight(&self) -> Weight {
        match self {
            WeightDecl::Coefficients(c) => Weight::Polynomial(c.clone()),
            WeightDecl::Named(NamedWeight::Const { value }) => Weight::Const(*value),
            WeightDecl::Named(NamedWeight::Exp { scale, rate }) => {
                Weight::Exp { scale: *scale, rate: *rate }
            }
            WeightDecl::Named(NamedWeight::Affine { intercept, slope }) => {
                Weight::Affine { intercept: *intercept, slope: *slope }
            }
            WeightDecl::Named(NamedWeight::Polynomial { coefficients }) => {
                Weight::Polynomial(coefficients.clone())
            }
        }
    }
}

/// Input problems: the message names the offending field where possible.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Invalid { field: String, source: Error },
    #[error("{0}")]
    Other(String),
}

fn params<T: DeserializeOwned>(family: &str, v: &Value) -> Result<T, ConfigError> {
    serde_json::from_value(v.clone()).map_err(|e| ConfigError::Other(format!("params ({family}): {e}")))
}

fn invalid(field: &str) -> impl Fn(Error) -> ConfigError + '_ {
    move |source| ConfigError::Invalid { field: field.to_string(), source }
}

pub fn interval_from(field: &str, v: [f64; 2]) -> Result<Interval, ConfigError> {
    Interval::new(v[0], v[1]).map_err(invalid(field))
}

pub fn build_chain(weights: &[WeightDecl], anchor: Option<f64>, domain: Interval) -> Result<WeightChain, ConfigError> {
    let weights = weights.iter().map(WeightDecl::to_weight).collect();
    WeightChain::new(weights, anchor.unwrap_or(domain.a()), domain).map_err(invalid("weights"))
}

impl SystemDecl {
    pub fn build(&self) -> Result<FunctionSystem, ConfigError> {
        let domain = interval_from("domain", self.domain)?;
        let fam = self.family.as_str();
        let sys = match fam {
            "monomial" => FunctionSystem::monomial(params::<CountParams>(fam, &self.params)?.count, domain),
            "muntz" => FunctionSystem::muntz(params::<ExponentParams>(fam, &self.params)?.exponents, domain),
            "cauchy" => FunctionSystem::cauchy(params::<CentreParams>(fam, &self.params)?.s, domain),
            "gauss" => FunctionSystem::gauss(params::<CentreParams>(fam, &self.params)?.s, domain),
            "green_unit" => FunctionSystem::green_unit(params::<CentreParams>(fam, &self.params)?.s, domain),
            "custom" => {
                FunctionSystem::polynomials(params::<CustomParams>(fam, &self.params)?.polynomials, domain)
            }
            "nested" => {
                let p = params::<NestedParams>(fam, &self.params)?;
                return Ok(build_nested(build_chain(&p.weights, p.anchor, domain)?));
            }
            other => {
                return Err(ConfigError::Other(format!(
                    "family: unknown family `{other}` (expected monomial, muntz, cauchy, gauss, green_unit, nested or custom)"
                )))
            }
        };
        sys.map_err(invalid("params"))
    }
}

/// Optional tolerance overrides.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Remez stopping tolerance.
    pub remez: Option<f64>,
    /// Remez iteration cap.
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub system: SystemDecl,
    pub interval: Option<[f64; 2]>,
    #[serde(default = "simple_mode")]
    pub mode: KnotMode,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub seed: Option<u64>,
}

fn simple_mode() -> KnotMode {
    KnotMode::Simple
}

fn default_samples() -> usize {
    500
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotData {
    pub t: f64,
    /// `u(t), u'(t), …`; the multiplicity is the length.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateConfig {
    pub system: SystemDecl,
    pub knots: Vec<KnotData>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtConfig {
    pub system: SystemDecl,
    pub alpha: f64,
    pub beta: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Also emit the boundary basis `v_j`, `w_j`.
    #[serde(default)]
    pub basis: bool,
    pub seed: Option<u64>,
}

/// Target functions for `remez`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    Polynomial { coefficients: Vec<f64> },
    Abs {
        #[serde(default)]
        shift: f64,
    },
    Exp {
        #[serde(default = "one")]
        rate: f64,
    },
    Sin {
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    Cos {
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `1 / (1 + scale·t²)`
    Runge {
        #[serde(default = "runge_scale")]
        scale: f64,
    },
}

fn runge_scale() -> f64 {
    25.0
}

impl Target {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Target::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
            }
            Target::Abs { shift } => (t - shift).abs(),
            Target::Exp { rate } => (rate * t).exp(),
            Target::Sin { frequency, phase } => (frequency * t + phase).sin(),
            Target::Cos { frequency, phase } => (frequency * t + phase).cos(),
            Target::Runge { scale } => 1.0 / (1.0 + scale * t * t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialDecl {
    Chebyshev,
    Uniform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemezConfig {
    pub system: SystemDecl,
    pub target: Target,
    pub interval: Option<[f64; 2]>,
    pub initial: Option<InitialDecl>,
    pub tolerances: Option<Tolerances>,
    #[serde(default = "curve_points")]
    pub curve_points: usize,
    pub seed: Option<u64>,
}

fn curve_points() -> usize {
    2001
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub moments: Vec<f64>,
    pub n: usize,
    pub interval: [f64; 2],
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryDecl {
    Subdisk { rho: f64 },
    Concentric { radii: Vec<f64> },
}

/// Sparse mode entry `c_m = re + i·im`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub m: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub nr: usize,
    pub ntheta: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyharmonicConfig {
    #[serde(rename = "N")]
    pub order_n: usize,
    #[serde(rename = "M")]
    pub mode_cutoff: usize,
    pub geometry: GeometryDecl,
    /// One row per derivative order (subdisk) or per circle (concentric).
    pub data: Vec<Vec<ModeEntry>>,
    pub field_grid: Option<FieldGrid>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedBuildConfig {
    pub weights: Vec<WeightDecl>,
    pub anchor: Option<f64>,
    pub domain: [f64; 2],
    #[serde(default = "nested_grid")]
    pub grid: usize,
    /// Run confluent certification with this many samples.
    pub certify_samples: Option<usize>,
    pub seed: Option<u64>,
}

fn nested_grid() -> usize {
    21
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    Ok(serde_json::from_str(text)?)
}
