//! Reference optimizers for comparisons: a plain Monte Carlo evolution
//! strategy and a fixed-schedule directional Gaussian smoothing (DGS) method.
//!
//! The DGS variant is a reconstruction: fresh random basis every iteration,
//! fixed quadrature size, fixed learning rate, and `σ ← σ(1 − γ)` per step.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::axpy;
use crate::objective::Counted;
use crate::optimizer::random_orthonormal_basis;
use crate::quadrature::gauss_hermite_rule;
use crate::smoothing::{self, directional_derivative, mc_gradient, DirectionalSample};
use crate::trace::{MinimizeResult, RunTrace, StepAction, Termination};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "harness", serde(default, deny_unknown_fields))]
pub struct EsConfig {
    pub sigma: f64,
    pub learning_rate: f64,
    pub sample_count: usize,
    pub max_iterations: usize,
    pub rng_seed: u64,
    /// Stop as soon as the best value drops to this level.
    pub target_value: Option<f64>,
}

impl Default for EsConfig {
    fn default() -> Self {
        EsConfig {
            sigma: 0.1,
            learning_rate: 0.01,
            sample_count: 100,
            max_iterations: 1_000,
            rng_seed: 0,
            target_value: None,
        }
    }
}

impl EsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma", "must be positive"));
        }
        if !(self.learning_rate >= 0.0) {
            return Err(Error::invalid("learning_rate", "must be nonnegative"));
        }
        if self.sample_count == 0 {
            return Err(Error::invalid("sample_count", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "harness", serde(default, deny_unknown_fields))]
pub struct DgsConfig {
    pub learning_rate: f64,
    /// Quadrature points per direction (odd, ≥ 3).
    pub point_count: usize,
    pub sigma: f64,
    /// Per-iteration decay `σ ← σ(1 − sigma_decay)`.
    pub sigma_decay: f64,
    pub max_iterations: usize,
    pub rng_seed: u64,
    pub target_value: Option<f64>,
    pub parallel: bool,
}

impl Default for DgsConfig {
    fn default() -> Self {
        DgsConfig {
            learning_rate: 0.1,
            point_count: 5,
            sigma: 1.0,
            sigma_decay: 0.01,
            max_iterations: 5_000,
            rng_seed: 0,
            target_value: None,
            parallel: false,
        }
    }
}

impl DgsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) {
            return Err(Error::invalid("learning_rate", "must be nonnegative"));
        }
        if self.point_count < 3 || self.point_count.is_multiple_of(2) {
            return Err(Error::invalid("point_count", "must be odd and at least 3"));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid("sigma", "must be positive"));
        }
        if !(self.sigma_decay >= 0.0 && self.sigma_decay < 1.0) {
            return Err(Error::invalid("sigma_decay", "must lie in [0, 1)"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be positive"));
        }
        Ok(())
    }
}

fn reached(target: Option<f64>, best: f64) -> bool {
    target.is_some_and(|t| best <= t)
}

/// Monte Carlo evolution strategy,
/// `x ← x − (2λ/(σM)) Σ ε_m f(x + σ ε_m)`.
///
/// Each iteration costs `M + 1` evaluations; the extra one scores the new
/// iterate for best-point tracking.
pub fn es_minimize(objective: &Counted<'_>, x0: &[f64], config: &EsConfig) -> Result<MinimizeResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut x = x0.to_vec();
    let mut value = objective.call(&x)?;
    let (mut best_point, mut best_value) = (x.clone(), value);
    let mut trace = vec![RunTrace {
        iteration: 0,
        best_value,
        current_value: value,
        sigma: config.sigma,
        learning_rate: config.learning_rate,
        cumulative_evaluations: objective.evaluations(),
        action: StepAction::Start,
    }];
    let mut termination = Termination::MaxIterationsReached;
    let mut iterations = 0;
    if reached(config.target_value, best_value) {
        termination = Termination::TargetReached;
    } else {
        for i in 1..=config.max_iterations {
            iterations = i;
            let gradient = mc_gradient(objective, &x, config.sigma, config.sample_count, &mut rng)?;
            axpy(-config.learning_rate, &gradient, &mut x);
            value = objective.call(&x)?;
            if value < best_value {
                best_value = value;
                best_point.clone_from(&x);
            }
            trace.push(RunTrace {
                iteration: i,
                best_value,
                current_value: value,
                sigma: config.sigma,
                learning_rate: config.learning_rate,
                cumulative_evaluations: objective.evaluations(),
                action: StepAction::Step,
            });
            if reached(config.target_value, best_value) {
                termination = Termination::TargetReached;
                break;
            }
        }
    }
    Ok(MinimizeResult {
        best_point,
        best_value,
        iterations,
        evaluations: objective.evaluations(),
        termination,
        trace,
    })
}

fn dgs_samples(
    objective: &Counted<'_>,
    x: &[f64],
    sigma: f64,
    basis: &[Vec<f64>],
    config: &DgsConfig,
) -> Result<Vec<DirectionalSample>> {
    let rule = gauss_hermite_rule(config.point_count)?;
    let one = |dir: &Vec<f64>| directional_derivative(objective, x, sigma, dir, &rule);
    #[cfg(feature = "parallel")]
    if config.parallel {
        use rayon::prelude::*;
        return basis.par_iter().map(one).collect();
    }
    basis.iter().map(one).collect()
}

/// Directional Gaussian smoothing with fixed hyperparameters.
///
/// Every iteration costs exactly `d · point_count` evaluations: the iterate
/// itself is the center quadrature node, so best-point tracking is free.
pub fn dgs_minimize(objective: &Counted<'_>, x0: &[f64], config: &DgsConfig) -> Result<MinimizeResult> {
    config.validate()?;
    let d = x0.len();
    let center = config.point_count / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut x = x0.to_vec();
    let mut sigma = config.sigma;
    let mut best_point = x.clone();
    let mut best_value = f64::INFINITY;
    let mut trace = Vec::new();
    let mut termination = Termination::MaxIterationsReached;
    let mut iterations = 0;

    for i in 1..=config.max_iterations {
        iterations = i;
        let basis = random_orthonormal_basis(d, &mut rng);
        let samples = dgs_samples(objective, &x, sigma, &basis, config)?;
        let value = samples[0].values[center];
        if value < best_value {
            best_value = value;
            best_point.clone_from(&x);
        }
        if reached(config.target_value, best_value) {
            termination = Termination::TargetReached;
        }
        let gradient = smoothing::combine(&samples);
        trace.push(RunTrace {
            iteration: i,
            best_value,
            current_value: value,
            sigma,
            learning_rate: config.learning_rate,
            cumulative_evaluations: objective.evaluations(),
            action: StepAction::Step,
        });
        if termination == Termination::TargetReached {
            break;
        }
        axpy(-config.learning_rate, &gradient, &mut x);
        sigma *= 1.0 - config.sigma_decay;
    }
    Ok(MinimizeResult {
        best_point,
        best_value,
        iterations,
        evaluations: objective.evaluations(),
        termination,
        trace,
    })
}
