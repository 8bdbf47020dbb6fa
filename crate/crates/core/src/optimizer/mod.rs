//! The adaptive stochastic gradient-free (ASGF) optimizer.
//!
//! Each iteration estimates the smoothed gradient from one quadrature per
//! basis direction, takes a gradient step with learning rate
//! `σ / L_∇`, and then adapts the smoothing radius and the basis:
//! the first basis row follows the new gradient direction, the remaining rows
//! are a fresh random complement. When the radius collapses below
//! `reset_factor · sigma0` the radius, basis and thresholds are restored, at
//! most `reset_budget` times per run.

mod basis;
mod config;

pub use basis::{complete_basis, random_orthonormal_basis};
pub use config::{sigma0_for_box, AsgfConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, axpy};
use crate::objective::Counted;
use crate::quadrature::gauss_hermite_rule;
use crate::smoothing::{self, directional_derivative, DirectionalSample};
use crate::trace::{MinimizeResult, RunTrace, StepAction, Termination};

/// Main-direction sample from the adaptive quadrature sequence `m = 3, 5, 7, …`.
#[derive(Debug, Clone)]
pub struct AdaptiveSample {
    pub sample: DirectionalSample,
    /// `false` when `max_points` was reached before two consecutive
    /// estimates agreed within `eps_m`.
    pub converged: bool,
    /// Objective calls spent across all refinements.
    pub evaluations: u64,
}

/// Refines the main-direction quadrature until two consecutive estimates
/// differ by less than `eps_m` (absolute), or `max_points` is reached.
pub fn adaptive_main_derivative(
    objective: &Counted<'_>,
    x: &[f64],
    sigma: f64,
    direction: &[f64],
    eps_m: f64,
    max_points: usize,
) -> Result<AdaptiveSample> {
    if !(eps_m > 0.0) {
        return Err(Error::invalid("eps_m", "must be positive"));
    }
    if max_points < 3 {
        return Err(Error::invalid("max_points", "must be at least 3"));
    }
    let mut m = 3;
    let mut sample = directional_derivative(objective, x, sigma, direction, &*gauss_hermite_rule(m)?)?;
    let mut evaluations = m as u64;
    while m + 2 <= max_points {
        m += 2;
        let next = directional_derivative(objective, x, sigma, direction, &*gauss_hermite_rule(m)?)?;
        evaluations += m as u64;
        let settled = (next.derivative_estimate - sample.derivative_estimate).abs() < eps_m;
        sample = next;
        if settled {
            return Ok(AdaptiveSample {
                sample,
                converged: true,
                evaluations,
            });
        }
    }
    Ok(AdaptiveSample {
        sample,
        converged: false,
        evaluations,
    })
}

/// Mutable optimizer state. The basis is stored one direction per row.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub iterate: Vec<f64>,
    pub current_value: f64,
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub sigma: f64,
    pub basis: Vec<Vec<f64>>,
    /// Running average of main-direction Lipschitz estimates; `None` until
    /// the first non-degenerate step when no prior is configured.
    pub averaged_lipschitz: Option<f64>,
    pub threshold_low: f64,
    pub threshold_high: f64,
    pub resets_remaining: usize,
    pub iteration: usize,
    pub evaluations: u64,
    rng: ChaCha8Rng,
}

impl OptimizerState {
    /// Evaluates `x0` once and draws the initial random basis.
    pub fn new(objective: &Counted<'_>, x0: &[f64], config: &AsgfConfig) -> Result<Self> {
        config.validate()?;
        if x0.len() != objective.dimension() {
            return Err(Error::LengthMismatch {
                expected: objective.dimension(),
                actual: x0.len(),
            });
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("x0", "must be finite"));
        }
        let value = objective.call(x0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        let basis = random_orthonormal_basis(x0.len(), &mut rng);
        Ok(OptimizerState {
            iterate: x0.to_vec(),
            current_value: value,
            best_point: x0.to_vec(),
            best_value: value,
            sigma: config.sigma0,
            basis,
            averaged_lipschitz: config.lipschitz_prior,
            threshold_low: config.a0,
            threshold_high: config.b0,
            resets_remaining: config.reset_budget,
            iteration: 0,
            evaluations: objective.evaluations(),
            rng,
        })
    }

    pub fn dimension(&self) -> usize {
        self.iterate.len()
    }
}

/// Diagnostics for one iteration.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub gradient: Vec<f64>,
    /// `σ / L_∇` with the post-update average; zero on degenerate steps.
    pub learning_rate: f64,
    /// Radius the step was taken with.
    pub sigma: f64,
    pub main_point_count: usize,
    pub main_converged: bool,
    pub derivatives: Vec<f64>,
    pub lipschitz_constants: Vec<f64>,
    pub ratio_max: f64,
    pub step_norm: f64,
    pub action: StepAction,
}

/// Folds a main-direction Lipschitz estimate into the running average and
/// returns the learning rate `σ / L_∇`. Without a prior the first call
/// adopts `l1` as is.
///
/// A zero average leaves the state untouched and returns `None`.
pub fn update_learning_rate(state: &mut OptimizerState, l1: f64, gamma_l: f64) -> Option<f64> {
    let averaged = match state.averaged_lipschitz {
        None => l1,
        Some(prev) => (1.0 - gamma_l) * l1 + gamma_l * prev,
    };
    if !(averaged > 0.0 && averaged.is_finite()) {
        return None;
    }
    state.averaged_lipschitz = Some(averaged);
    Some(state.sigma / averaged)
}

/// `max_j |derivative_j / L_j|`, where a direction with `L_j = 0` contributes 0.
pub fn derivative_ratio(samples: &[DirectionalSample]) -> f64 {
    samples
        .iter()
        .map(|s| {
            if s.lipschitz_estimate == 0.0 {
                0.0
            } else {
                (s.derivative_estimate / s.lipschitz_estimate).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Adapts the smoothing radius, thresholds and basis after a non-terminating
/// step. Returns which branch fired.
pub fn update_parameters(
    state: &mut OptimizerState,
    gradient: &[f64],
    samples: &[DirectionalSample],
    config: &AsgfConfig,
) -> Result<StepAction> {
    if state.resets_remaining > 0 && state.sigma < config.reset_factor * config.sigma0 {
        state.basis = random_orthonormal_basis(state.dimension(), &mut state.rng);
        state.sigma = config.sigma0;
        state.threshold_low = config.a0;
        state.threshold_high = config.b0;
        state.resets_remaining -= 1;
        log::debug!(
            "iteration {}: parameter reset, {} left",
            state.iteration,
            state.resets_remaining
        );
        return Ok(StepAction::Reset);
    }

    state.basis = complete_basis(gradient, &mut state.rng)?;
    let ratio = derivative_ratio(samples);
    if ratio < state.threshold_low {
        state.sigma *= config.gamma_sigma;
        state.threshold_low *= config.a_minus;
        Ok(StepAction::SigmaDecreased)
    } else if ratio > state.threshold_high {
        state.sigma /= config.gamma_sigma;
        state.threshold_high *= config.b_plus;
        Ok(StepAction::SigmaIncreased)
    } else {
        let low = state.threshold_low * config.a_plus;
        let high = state.threshold_high * config.b_minus;
        if low < high {
            state.threshold_low = low;
            state.threshold_high = high;
        } else {
            log::debug!(
                "iteration {}: threshold update skipped ({low} >= {high})",
                state.iteration
            );
        }
        Ok(StepAction::ThresholdsTightened)
    }
}

fn sample_directions(
    objective: &Counted<'_>,
    state: &OptimizerState,
    config: &AsgfConfig,
) -> Result<(Vec<DirectionalSample>, usize, bool)> {
    let aux_rule = gauss_hermite_rule(config.aux_point_count)?;
    let one = |j: usize| -> Result<(DirectionalSample, bool)> {
        let direction = &state.basis[j];
        if j == 0 {
            let main = adaptive_main_derivative(
                objective,
                &state.iterate,
                state.sigma,
                direction,
                config.eps_m,
                config.max_main_points,
            )?;
            Ok((main.sample, main.converged))
        } else {
            directional_derivative(objective, &state.iterate, state.sigma, direction, &aux_rule)
                .map(|s| (s, true))
        }
    };

    let d = state.dimension();
    #[cfg(feature = "parallel")]
    let results: Vec<Result<(DirectionalSample, bool)>> = if config.parallel && d > 1 {
        use rayon::prelude::*;
        (0..d).into_par_iter().map(one).collect()
    } else {
        (0..d).map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(DirectionalSample, bool)>> = (0..d).map(one).collect();

    let mut samples = Vec::with_capacity(d);
    let mut converged = true;
    for r in results {
        let (s, c) = r?;
        if samples.is_empty() {
            converged = c;
        }
        samples.push(s);
    }
    let main_points = samples[0].point_count();
    Ok((samples, main_points, converged))
}

/// One ASGF iteration: estimate, step, track the best point, then either
/// terminate (step shorter than `eps_x`) or adapt the parameters.
pub fn asgf_step(objective: &Counted<'_>, state: &mut OptimizerState, config: &AsgfConfig) -> Result<StepReport> {
    let (samples, main_point_count, main_converged) = sample_directions(objective, state, config)?;
    let gradient = smoothing::combine(&samples);
    let derivatives: Vec<f64> = samples.iter().map(|s| s.derivative_estimate).collect();
    let lipschitz_constants: Vec<f64> = samples.iter().map(|s| s.lipschitz_estimate).collect();
    let ratio_max = derivative_ratio(&samples);
    let sigma = state.sigma;
    state.iteration += 1;

    let gradient_norm = linalg::norm(&gradient);
    let learning_rate = if gradient_norm > 0.0 {
        update_learning_rate(state, lipschitz_constants[0], config.gamma_l)
    } else {
        None
    };
    let Some(learning_rate) = learning_rate else {
        state.basis = random_orthonormal_basis(state.dimension(), &mut state.rng);
        state.evaluations = objective.evaluations();
        return Ok(StepReport {
            gradient,
            learning_rate: 0.0,
            sigma,
            main_point_count,
            main_converged,
            derivatives,
            lipschitz_constants,
            ratio_max,
            step_norm: 0.0,
            action: StepAction::DegenerateGradient,
        });
    };

    let mut next = state.iterate.clone();
    axpy(-learning_rate, &gradient, &mut next);
    let value = objective.call(&next)?;
    let step_norm = learning_rate * gradient_norm;
    state.iterate = next;
    state.current_value = value;
    if value < state.best_value {
        state.best_value = value;
        state.best_point = state.iterate.clone();
    }

    let action = if step_norm < config.eps_x {
        StepAction::Terminated
    } else {
        update_parameters(state, &gradient, &samples, config)?
    };
    state.evaluations = objective.evaluations();
    Ok(StepReport {
        gradient,
        learning_rate,
        sigma,
        main_point_count,
        main_converged,
        derivatives,
        lipschitz_constants,
        ratio_max,
        step_norm,
        action,
    })
}

/// Step-wise driver around [`asgf_step`] that records a trace.
pub struct Asgf<'o, 'a> {
    objective: &'o Counted<'a>,
    config: AsgfConfig,
    state: OptimizerState,
    trace: Vec<RunTrace>,
    finished: Option<Termination>,
}

impl<'o, 'a> Asgf<'o, 'a> {
    pub fn new(objective: &'o Counted<'a>, x0: &[f64], config: &AsgfConfig) -> Result<Self> {
        let state = OptimizerState::new(objective, x0, config)?;
        let trace = vec![RunTrace {
            iteration: 0,
            best_value: state.best_value,
            current_value: state.current_value,
            sigma: state.sigma,
            learning_rate: 0.0,
            cumulative_evaluations: objective.evaluations(),
            action: StepAction::Start,
        }];
        Ok(Asgf {
            objective,
            config: config.clone(),
            state,
            trace,
            finished: None,
        })
    }

    pub fn state(&self) -> &OptimizerState {
        &self.state
    }

    pub fn trace(&self) -> &[RunTrace] {
        &self.trace
    }

    pub fn termination(&self) -> Option<Termination> {
        self.finished
    }

    /// Runs one iteration; `Ok(None)` once the run has finished.
    pub fn step(&mut self) -> Result<Option<StepReport>> {
        if self.finished.is_some() {
            return Ok(None);
        }
        let report = asgf_step(self.objective, &mut self.state, &self.config)?;
        self.trace.push(RunTrace {
            iteration: self.state.iteration,
            best_value: self.state.best_value,
            current_value: self.state.current_value,
            sigma: report.sigma,
            learning_rate: report.learning_rate,
            cumulative_evaluations: self.objective.evaluations(),
            action: report.action,
        });
        if report.action == StepAction::Terminated {
            self.finished = Some(Termination::Converged);
        } else if self.state.iteration >= self.config.max_iterations {
            self.finished = Some(Termination::MaxIterationsReached);
        }
        Ok(Some(report))
    }

    /// Runs to completion, handing each step to `observe`.
    pub fn run_with<F>(mut self, mut observe: F) -> Result<MinimizeResult>
    where
        F: FnMut(&OptimizerState, &StepReport),
    {
        while let Some(report) = self.step()? {
            observe(&self.state, &report);
        }
        Ok(self.into_result())
    }

    pub fn into_result(self) -> MinimizeResult {
        MinimizeResult {
            best_point: self.state.best_point,
            best_value: self.state.best_value,
            iterations: self.state.iteration,
            evaluations: self.objective.evaluations(),
            termination: self.finished.unwrap_or(Termination::MaxIterationsReached),
            trace: self.trace,
        }
    }
}

/// Minimizes `objective` from `x0`, returning the best point seen and the
/// per-iteration trace.
pub fn minimize(objective: &Counted<'_>, x0: &[f64], config: &AsgfConfig) -> Result<MinimizeResult> {
    Asgf::new(objective, x0, config)?.run_with(|_, _| {})
}
