//! Robust estimation and testing built on the density power divergence.
//!
//! The tuning parameter β ≥ 0 trades efficiency (β = 0 recovers maximum
//! likelihood) against resistance to outliers. The crate provides:
//!
//! - minimum density power divergence estimation for exponential, normal
//!   and Weibull models ([`estimate`], [`families`]);
//! - Wald-type tests for simple and composite null hypotheses, with
//!   closed-form specializations and signed one-sided variants ([`wald`]);
//! - asymptotic power approximation, contiguous-alternative noncentral
//!   distributions and sample-size planning ([`power`]);
//! - data-driven selection of β ([`tuning`]);
//! - a deterministic Monte Carlo level/power harness ([`mc`]);
//! - embedded benchmark datasets and canned analyses ([`data`]);
//! - the supporting special functions and adaptive quadrature
//!   ([`special`], [`quad`]).

// `!(x > 0.0)` style guards are deliberate: they treat NaN as a domain
// violation, which `x <= 0.0` would silently pass.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod estimate;
pub mod families;
pub mod matrix;
pub mod mc;
pub mod model;
pub mod power;
pub mod quad;
pub mod special;
pub mod tuning;
pub mod wald;

pub use error::{Error, Result};
pub use estimate::{dpd_objective, estimating_residual, exp_fixed_point_step, fit_mdpde, FitOptions, MdpdeFit};
pub use families::{create_family, create_family_with, exp_h_factor, family_names, KMatrixConvention};
pub use model::{density, log_density, sample, score, ModelFamily, Sample, Theta};
pub use quad::{integrate, Quadrature, QuadratureSpec};
pub use wald::{Alternative, Restriction, TailReference, WaldTestResult};
