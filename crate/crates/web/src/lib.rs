//! Functions behind `www/index.html`. Everything returns flat `f64` arrays so
//! the page can draw them without any glue beyond wasm-bindgen.

use asgf::{gauss_hermite_rule, Asgf, AsgfConfig, BenchmarkSpec, Counted};
use wasm_bindgen::prelude::*;

fn two_d(name: &str) -> Result<BenchmarkSpec, JsError> {
    let spec = BenchmarkSpec::lookup(name).or_else(|_| BenchmarkSpec::lookup(&format!("{name}-2")))?;
    if spec.dimension != 2 {
        return Err(JsError::new(&format!("{} is not two-dimensional", spec.id())));
    }
    Ok(spec)
}

/// `[x_lo, x_hi, y_lo, y_hi, f_min]` for a 2-d benchmark.
#[wasm_bindgen]
pub fn benchmark_bounds(name: &str) -> Result<Vec<f64>, JsError> {
    let spec = two_d(name)?;
    let [(x0, x1), (y0, y1)] = [spec.bounds[0], spec.bounds[1]];
    Ok(vec![x0, x1, y0, y1, spec.global_minimum_value])
}

/// Function values on a `resolution × resolution` grid over the benchmark
/// box, row by row from the bottom edge.
#[wasm_bindgen]
pub fn benchmark_grid(name: &str, resolution: usize) -> Result<Vec<f64>, JsError> {
    let spec = two_d(name)?;
    let n = resolution.clamp(2, 1024);
    let [(x0, x1), (y0, y1)] = [spec.bounds[0], spec.bounds[1]];
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let y = y0 + (y1 - y0) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let x = x0 + (x1 - x0) * j as f64 / (n - 1) as f64;
            out.push(spec.value(&[x, y])?);
        }
    }
    Ok(out)
}

/// Runs ASGF from `(x, y)` and returns one `[x, y, f, sigma, evaluations]`
/// record per iteration, starting with the initial point.
#[wasm_bindgen]
pub fn asgf_trajectory(
    name: &str,
    x: f64,
    y: f64,
    seed: u64,
    sigma_scale: f64,
    max_iterations: usize,
) -> Result<Vec<f64>, JsError> {
    let spec = two_d(name)?;
    let config = AsgfConfig {
        sigma0: spec.default_sigma0() * sigma_scale,
        max_iterations: max_iterations.clamp(1, 5000),
        rng_seed: seed,
        ..Default::default()
    };
    let counted = Counted::new(&spec);
    let mut run = Asgf::new(&counted, &[x, y], &config)?;
    let mut out = Vec::new();
    loop {
        let s = run.state();
        out.extend([s.iterate[0], s.iterate[1], s.current_value, s.sigma, s.evaluations as f64]);
        if run.step()?.is_none() {
            return Ok(out);
        }
    }
}

/// Gauss–Hermite nodes followed by weights for `m` points.
#[wasm_bindgen]
pub fn quadrature_rule(m: usize) -> Result<Vec<f64>, JsError> {
    let rule = gauss_hermite_rule(m)?;
    Ok(rule.nodes().iter().chain(rule.weights()).copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_corner_matches_direct_evaluation() {
        let g = benchmark_grid("dropwave", 3).unwrap();
        let spec = BenchmarkSpec::lookup("dropwave").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[4], spec.value(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn trajectory_records_every_iteration() {
        let t = asgf_trajectory("sphere", 3.0, -2.0, 1, 1.0, 200).unwrap();
        assert_eq!(t.len() % 5, 0);
        assert_eq!(&t[..3], &[3.0, -2.0, 13.0]);
        let last = &t[t.len() - 5..];
        assert!(last[2] < 1e-6);
    }

    #[test]
    fn quadrature_halves() {
        let q = quadrature_rule(3).unwrap();
        assert_eq!(q.len(), 6);
        let total: f64 = q[3..].iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
