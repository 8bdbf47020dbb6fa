//! Dense vector helpers. Matrices are stored as `Vec<Vec<f64>>` with one
//! direction per row.

use rand::Rng;
use rand_distr::StandardNormal;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Largest absolute entry of `M Mᵀ − I`.
pub fn gram_deviation(rows: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(a, b) - target).abs());
        }
    }
    worst
}

/// Removes the components of `v` along each (unit) row of `basis`, twice,
/// then normalizes. Returns `None` when `v` is numerically inside the span.
pub(crate) fn orthonormalize_against(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let start = norm(&v);
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for q in basis {
            let c = dot(&v, q);
            axpy(-c, q, &mut v);
        }
    }
    let n = norm(&v);
    if n <= 1e-10 * start {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(v)
}
