use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: need a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("function index {index} out of range for a system of {count} functions")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("derivative order {order} exceeds the declared smoothness {smoothness}")]
    DerivativeOrder { order: usize, smoothness: usize },
    #[error("t = {t} lies outside the domain [{a}, {b}]")]
    OutsideDomain { t: f64, a: f64, b: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("malformed knots: {0}")]
    MalformedKnots(String),
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error("singular system (relative smallest singular value {ratio:e})")]
    Singular { ratio: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("weight w_{index} is not positive at t = {t}")]
    NonPositiveWeight { index: usize, t: f64 },
    #[error("Hankel matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("ill-conditioned problem: {0}")]
    Conditioning(String),
    #[error("nested integration did not reach tolerance at t = {t}")]
    Integration { t: f64 },
    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
