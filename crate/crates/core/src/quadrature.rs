//! Gauss–Hermite quadrature for the weight `e^{-v²}`.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
//! the Hermite polynomials (zero diagonal, off-diagonal `√(k/2)`), located by
//! Sturm-sequence bisection and then polished with Newton steps on the
//! orthonormal three-term recurrence. Weights come from the Christoffel
//! function `w(x) = 1 / Σ_{k<m} p_k(x)²`, which keeps full relative accuracy
//! for the tiny weights of the outermost nodes. Only the nonnegative half is
//! computed; the negative half is its exact mirror image.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest point count accepted by [`gauss_hermite_rule`].
pub const DEFAULT_MAX_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `point_count`-point rule without consulting the cache.
    pub fn compute(point_count: usize, cap: usize) -> Result<Self> {
        if point_count == 0 || point_count > cap {
            return Err(Error::PointCount {
                requested: point_count,
                cap,
            });
        }
        let n = point_count;
        let half = n / 2;
        // Positive roots in ascending order.
        let positive: Vec<f64> = (0..half)
            .map(|i| {
                let index = n - half + i; // 0-based eigenvalue index
                polish_root(n, bisect_eigenvalue(n, index))
            })
            .collect();

        let mut nodes = Vec::with_capacity(n);
        nodes.extend(positive.iter().rev().map(|p| -p));
        if n % 2 == 1 {
            nodes.push(0.0);
        }
        nodes.extend(positive.iter().copied());

        let positive_weights: Vec<f64> = positive.iter().map(|&x| christoffel_weight(n, x)).collect();
        let mut weights = Vec::with_capacity(n);
        weights.extend(positive_weights.iter().rev().copied());
        if n % 2 == 1 {
            weights.push(christoffel_weight(n, 0.0));
        }
        weights.extend(positive_weights.iter().copied());

        Ok(QuadratureRule { nodes, weights })
    }

    pub fn point_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in strictly ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_m · samples_m`.
    pub fn integrate(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.point_count() {
            return Err(Error::LengthMismatch {
                expected: self.point_count(),
                actual: samples.len(),
            });
        }
        Ok(self.weights.iter().zip(samples).map(|(w, s)| w * s).sum())
    }

    /// `Σ w_m p_m samples_m`, accumulated over mirrored node pairs so that
    /// samples which are even about the center cancel exactly.
    pub(crate) fn first_moment(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.point_count());
        let n = self.point_count();
        (0..n / 2)
            .map(|k| {
                let mirror = n - 1 - k;
                self.weights[mirror] * self.nodes[mirror] * (samples[mirror] - samples[k])
            })
            .sum()
    }
}

/// Cached `point_count`-point rule, capped at [`DEFAULT_MAX_POINTS`].
pub fn gauss_hermite_rule(point_count: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&point_count) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(QuadratureRule::compute(point_count, DEFAULT_MAX_POINTS)?);
    let mut guard = cache.write().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(guard.entry(point_count).or_insert(rule)))
}

/// Free-function form of [`QuadratureRule::integrate`].
pub fn integrate(rule: &QuadratureRule, samples: &[f64]) -> Result<f64> {
    rule.integrate(samples)
}

fn off_diagonal_sq(k: usize) -> f64 {
    k as f64 / 2.0
}

/// Number of Jacobi-matrix eigenvalues strictly below `x`.
fn sturm_count(n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..n {
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = -x - off_diagonal_sq(k) / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalue(n: usize, index: usize) -> f64 {
    let bound = (2.0 * n as f64).sqrt() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(n, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Orthonormal Hermite values `(p_{n-1}(x), p_n(x))`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    for k in 0..n {
        let b_next = ((k + 1) as f64 / 2.0).sqrt();
        let b_cur = (k as f64 / 2.0).sqrt();
        let next = (x * cur - b_cur * prev) / b_next;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

fn polish_root(n: usize, mut x: f64) -> f64 {
    for _ in 0..8 {
        let (p_prev, p_n) = orthonormal_pair(n, x);
        let derivative = (2.0 * n as f64).sqrt() * p_prev;
        if derivative == 0.0 {
            break;
        }
        let step = p_n / derivative;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

fn christoffel_weight(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    let mut sum = cur * cur;
    for k in 0..n.saturating_sub(1) {
        let b_next = ((k + 1) as f64 / 2.0).sqrt();
        let b_cur = (k as f64 / 2.0).sqrt();
        let next = (x * cur - b_cur * prev) / b_next;
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    1.0 / sum
}
