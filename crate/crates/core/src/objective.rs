use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// A black-box function `ℝᵈ → ℝ`.
///
/// Implementations must be deterministic for a fixed input; stochastic
/// objectives should carry their own seeded noise. `evaluate` may be called
/// concurrently from several worker threads.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String>;
}

/// Adapts an infallible closure into an [`Objective`].
pub struct FnObjective<F> {
    dimension: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        FnObjective { dimension, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String> {
        Ok((self.f)(x))
    }
}

/// Wraps an objective with an atomic call counter and finiteness checks.
///
/// Every estimator and optimizer in this crate evaluates through a
/// `Counted`, so the counter is the single source of truth for evaluation
/// budgets.
pub struct Counted<'a> {
    inner: &'a dyn Objective,
    calls: AtomicU64,
}

impl<'a> Counted<'a> {
    pub fn new(inner: &'a dyn Objective) -> Self {
        Counted {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    pub fn evaluations(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn call(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        self.calls.fetch_add(1, Ordering::SeqCst);
        match self.inner.evaluate(x) {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(value) => Err(Error::NonFinite {
                point: x.to_vec(),
                value,
            }),
            Err(message) => Err(Error::Objective {
                point: x.to_vec(),
                message,
            }),
        }
    }
}
