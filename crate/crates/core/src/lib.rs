//! Adaptive stochastic gradient-free optimization.
//!
//! The crate estimates gradients of a Gaussian-smoothed objective one
//! direction at a time with Gauss–Hermite quadrature, and wraps those
//! estimates in the ASGF optimizer, which adapts its learning rate, smoothing
//! radius and search directions from local Lipschitz estimates. Baseline
//! optimizers, standard benchmark functions, and (with the `harness`
//! feature) an experiment runner are included.

// `!(x > 0.0)` is used on purpose so that NaN parameters fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod benchmarks;
mod error;
#[cfg(feature = "harness")]
pub mod harness;
pub mod linalg;
pub mod objective;
pub mod optimizer;
pub mod quadrature;
pub mod smoothing;
mod trace;

pub use baselines::{dgs_minimize, es_minimize, DgsConfig, EsConfig};
pub use benchmarks::{BenchmarkKind, BenchmarkSpec};
pub use error::{Error, Result};
pub use objective::{Counted, FnObjective, Objective};
pub use optimizer::{minimize, Asgf, AsgfConfig, OptimizerState, StepReport};
pub use quadrature::{gauss_hermite_rule, QuadratureRule};
pub use smoothing::DirectionalSample;
pub use trace::{MinimizeResult, RunTrace, StepAction, Termination};
