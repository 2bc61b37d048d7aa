//! Weighted Bloch and Q_K(p, q) norms, Stević–Sharma type operators and
//! numerical essential-norm estimates.
//!
//! Everything is generic over [`Scalar`] (`f32`, `f64`); the aliases below fix
//! `f64`.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod essnorm;
pub mod funcalg;
pub mod norms;
pub mod operators;
pub mod quad;
pub mod scalar;
pub mod testfn;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Function = funcalg::AnalyticFunction<f64>;
pub type Symbols = operators::SymbolConfig<f64>;
pub type Operator = operators::OperatorSpec<f64>;
pub type BlochWeight = weights::Weight<f64>;
pub type QkSpace = weights::SpaceParams<f64>;
pub type Report = essnorm::EstimateReport<f64>;
pub type Complex64 = num_complex::Complex<f64>;
