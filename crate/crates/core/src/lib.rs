//! Numerical toolkit for Chebyshev systems.
//!
//! One-dimensional side: function systems ([`system`]), collocation and
//! confluent determinants with randomized certification ([`colloc`]),
//! extended systems built from positive weight chains ([`construct`]),
//! Hermite and two-point interpolation ([`interp`]), minimax approximation
//! by Remez exchange ([`approx`]) and the monomial moment problem
//! ([`moments`]).
//!
//! Multidimensional side: polyharmonic functions `Δ^N u = 0` on the unit
//! disk, solved mode by mode in the layered representation
//! `Σ a_{m,k} r^{|m|+2k} e^{imθ}` ([`polyharmonic`]).

pub mod approx;
pub mod colloc;
pub mod construct;
pub mod error;
pub mod interp;
mod dd;
mod linalg;
pub mod moments;
pub mod polyharmonic;
pub mod system;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use system::{FunctionSystem, Interval, SpanElement};

/// Relative singular-value threshold below which a square system is
/// treated as singular. Shared by every module.
pub const SINGULAR_TOL: f64 = 1e-10;
