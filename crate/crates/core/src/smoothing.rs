//! Directional Gaussian-smoothing estimators.
//!
//! For a unit direction `ξ` the derivative of the smoothed objective is
//! approximated by an `m`-point Gauss–Hermite rule,
//! `(2 / (σ√π)) Σ w_k p_k f(x + σ p_k ξ)`. The same samples also yield a
//! local Lipschitz estimate from consecutive-node difference quotients, so a
//! direction never needs to be sampled twice.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, axpy};
use crate::objective::Counted;
use crate::quadrature::QuadratureRule;

const UNIT_TOLERANCE: f64 = 1e-10;
const ORTHONORMAL_TOLERANCE: f64 = 1e-6;

/// Objective samples along one direction plus the estimates derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalSample {
    pub direction: Vec<f64>,
    /// `f(x + σ p_k ξ)` in ascending node order.
    pub values: Vec<f64>,
    pub derivative_estimate: f64,
    pub lipschitz_estimate: f64,
}

impl DirectionalSample {
    pub fn point_count(&self) -> usize {
        self.values.len()
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("sigma", format!("must be positive and finite, got {sigma}")))
    }
}

/// Quadrature estimate of the smoothed directional derivative along `direction`.
///
/// Makes exactly `rule.point_count()` objective calls. The Lipschitz estimate
/// is filled in when the rule has at least two points, and is zero otherwise.
pub fn directional_derivative(
    objective: &Counted<'_>,
    x: &[f64],
    sigma: f64,
    direction: &[f64],
    rule: &QuadratureRule,
) -> Result<DirectionalSample> {
    check_sigma(sigma)?;
    if direction.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: direction.len(),
        });
    }
    let n = linalg::norm(direction);
    if (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::invalid("direction", format!("must be unit norm, got {n}")));
    }

    let mut point = vec![0.0; x.len()];
    let values = rule
        .nodes()
        .iter()
        .map(|&p| {
            point.copy_from_slice(x);
            axpy(sigma * p, direction, &mut point);
            objective.call(&point)
        })
        .collect::<Result<Vec<f64>>>()?;

    let derivative_estimate = 2.0 / (sigma * PI.sqrt()) * rule.first_moment(&values);
    let lipschitz_estimate = if rule.point_count() >= 2 {
        lipschitz_from_values(&values, sigma, rule.nodes())
    } else {
        0.0
    };
    Ok(DirectionalSample {
        direction: direction.to_vec(),
        values,
        derivative_estimate,
        lipschitz_estimate,
    })
}

fn lipschitz_from_values(values: &[f64], sigma: f64, nodes: &[f64]) -> f64 {
    values
        .windows(2)
        .zip(nodes.windows(2))
        .map(|(v, p)| ((v[1] - v[0]) / (sigma * (p[1] - p[0]))).abs())
        .fold(0.0, f64::max)
}

/// Largest consecutive-node difference quotient of `sample.values`.
pub fn local_lipschitz(sample: &DirectionalSample, sigma: f64, rule: &QuadratureRule) -> Result<f64> {
    check_sigma(sigma)?;
    if rule.point_count() < 2 {
        return Err(Error::PointCount {
            requested: rule.point_count(),
            cap: usize::MAX,
        });
    }
    if sample.values.len() != rule.point_count() {
        return Err(Error::LengthMismatch {
            expected: rule.point_count(),
            actual: sample.values.len(),
        });
    }
    Ok(lipschitz_from_values(&sample.values, sigma, rule.nodes()))
}

/// `Σ_j derivative_j · ξ_j` over an orthonormal set of directions.
pub fn assemble_gradient(samples: &[DirectionalSample]) -> Result<Vec<f64>> {
    let d = samples.first().map_or(0, |s| s.direction.len());
    if samples.len() != d || d == 0 {
        return Err(Error::LengthMismatch {
            expected: d,
            actual: samples.len(),
        });
    }
    if let Some(bad) = samples.iter().find(|s| s.direction.len() != d) {
        return Err(Error::LengthMismatch {
            expected: d,
            actual: bad.direction.len(),
        });
    }
    let rows: Vec<Vec<f64>> = samples.iter().map(|s| s.direction.clone()).collect();
    let deviation = linalg::gram_deviation(&rows);
    if deviation > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(combine(samples))
}

/// Gradient assembly without the orthonormality check, in direction order.
pub(crate) fn combine(samples: &[DirectionalSample]) -> Vec<f64> {
    let d = samples[0].direction.len();
    let mut gradient = vec![0.0; d];
    for s in samples {
        axpy(s.derivative_estimate, &s.direction, &mut gradient);
    }
    gradient
}

/// Monte Carlo estimate `(2/(σM)) Σ ε_m f(x + σ ε_m)` with standard normal `ε_m`.
pub fn mc_gradient<R: Rng + ?Sized>(
    objective: &Counted<'_>,
    x: &[f64],
    sigma: f64,
    sample_count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    if sample_count == 0 {
        return Err(Error::invalid("sample_count", "must be at least 1"));
    }
    let d = x.len();
    let mut gradient = vec![0.0; d];
    let mut point = vec![0.0; d];
    for _ in 0..sample_count {
        let eps = linalg::gaussian_vector(d, rng);
        point.copy_from_slice(x);
        axpy(sigma, &eps, &mut point);
        let value = objective.call(&point)?;
        axpy(value, &eps, &mut gradient);
    }
    let scale = 2.0 / (sigma * sample_count as f64);
    gradient.iter_mut().for_each(|g| *g *= scale);
    Ok(gradient)
}

/// Draws `count` perturbation directions, orthogonal within each consecutive
/// block of `dim`, each with an independent chi-distributed length so the
/// marginals stay standard normal.
pub fn orthogonal_gaussian_directions<R: Rng + ?Sized>(
    dim: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let block = (count - out.len()).min(dim);
        let mut unit: Vec<Vec<f64>> = Vec::with_capacity(block);
        while unit.len() < block {
            let draw = linalg::gaussian_vector(dim, rng);
            if let Some(q) = linalg::orthonormalize_against(draw, &unit) {
                unit.push(q);
            }
        }
        for mut q in unit {
            let length = linalg::norm(&linalg::gaussian_vector(dim, rng));
            q.iter_mut().for_each(|v| *v *= length);
            out.push(q);
        }
    }
    out
}

/// Antithetic estimate `(1/(σM)) Σ ε_j (f(x + σ ε_j) − f(x − σ ε_j))` over
/// blockwise-orthogonal Gaussian directions. Makes `2M` objective calls.
pub fn orthogonal_antithetic_gradient<R: Rng + ?Sized>(
    objective: &Counted<'_>,
    x: &[f64],
    sigma: f64,
    sample_count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    if sample_count == 0 {
        return Err(Error::invalid("sample_count", "must be at least 1"));
    }
    let d = x.len();
    let mut gradient = vec![0.0; d];
    let mut plus = vec![0.0; d];
    let mut minus = vec![0.0; d];
    for eps in orthogonal_gaussian_directions(d, sample_count, rng) {
        plus.copy_from_slice(x);
        axpy(sigma, &eps, &mut plus);
        minus.copy_from_slice(x);
        axpy(-sigma, &eps, &mut minus);
        let diff = objective.call(&plus)? - objective.call(&minus)?;
        axpy(diff, &eps, &mut gradient);
    }
    let scale = 1.0 / (sigma * sample_count as f64);
    gradient.iter_mut().for_each(|g| *g *= scale);
    Ok(gradient)
}
