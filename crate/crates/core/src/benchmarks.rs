//! Standard global-optimization test functions with their usual sampling
//! boxes and known minima.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::Objective;

/// Default success tolerance on `best_value − global_minimum_value`.
pub const SUCCESS_TOLERANCE: f64 = 1e-4;

const CROSS_IN_TRAY_ARGMIN: f64 = 1.349_406_617_153_910_8;
const CROSS_IN_TRAY_MIN: f64 = -2.062_611_870_822_737;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    /// `a(x₂ − b x₁² + c x₁ − r)² + s(1 − t)cos x₁ + s`; minimum `5/(4π)` at
    /// `(−π, 12.275)`, `(π, 2.275)`, `(9.42478, 2.475)`.
    Branin,
    /// `−10⁻⁴ (|sin x₁ sin x₂ exp|100 − ‖x‖/π|| + 1)^0.1`; minimum ≈ −2.06261
    /// at `(±1.3494, ±1.3494)`.
    CrossInTray,
    /// `−(1 + cos(12‖x‖)) / (‖x‖²/2 + 2)`; minimum −1 at the origin.
    Dropwave,
    /// `Σ xᵢ²`; minimum 0 at the origin.
    Sphere,
    /// `−20 exp(−0.2 √(Σxᵢ²/d)) − exp(Σ cos(2πxᵢ)/d) + 20 + e`; minimum 0 at the origin.
    Ackley,
    /// With `wᵢ = 1 + (xᵢ − 1)/4`:
    /// `sin²(πw₁) + Σ_{i<d} (wᵢ−1)²(1 + 10 sin²(πwᵢ + 1)) + (w_d−1)²(1 + sin²(2πw_d))`;
    /// minimum 0 at `(1, …, 1)`.
    Levy,
    /// `10d + Σ (xᵢ² − 10 cos 2πxᵢ)`; minimum 0 at the origin.
    Rastrigin,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 7] = [
        BenchmarkKind::Branin,
        BenchmarkKind::CrossInTray,
        BenchmarkKind::Dropwave,
        BenchmarkKind::Sphere,
        BenchmarkKind::Ackley,
        BenchmarkKind::Levy,
        BenchmarkKind::Rastrigin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Branin => "branin",
            BenchmarkKind::CrossInTray => "cross-in-tray",
            BenchmarkKind::Dropwave => "dropwave",
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Ackley => "ackley",
            BenchmarkKind::Levy => "levy",
            BenchmarkKind::Rastrigin => "rastrigin",
        }
    }

    /// `Some(d)` for functions defined only in a fixed dimension.
    pub fn fixed_dimension(self) -> Option<usize> {
        match self {
            BenchmarkKind::Branin | BenchmarkKind::CrossInTray | BenchmarkKind::Dropwave => Some(2),
            _ => None,
        }
    }

    fn bounds(self, d: usize) -> Vec<(f64, f64)> {
        match self {
            BenchmarkKind::Branin => vec![(-5.0, 10.0), (0.0, 15.0)],
            BenchmarkKind::CrossInTray => vec![(-10.0, 10.0); 2],
            BenchmarkKind::Dropwave => vec![(-5.12, 5.12); 2],
            BenchmarkKind::Sphere | BenchmarkKind::Rastrigin => vec![(-5.12, 5.12); d],
            BenchmarkKind::Ackley => vec![(-32.768, 32.768); d],
            BenchmarkKind::Levy => vec![(-10.0, 10.0); d],
        }
    }

    fn minimum(self, d: usize) -> (Vec<f64>, f64) {
        match self {
            BenchmarkKind::Branin => (vec![PI, 2.275], 5.0 / (4.0 * PI)),
            BenchmarkKind::CrossInTray => (vec![CROSS_IN_TRAY_ARGMIN; 2], CROSS_IN_TRAY_MIN),
            BenchmarkKind::Dropwave => (vec![0.0; 2], -1.0),
            BenchmarkKind::Levy => (vec![1.0; d], 0.0),
            BenchmarkKind::Sphere | BenchmarkKind::Ackley | BenchmarkKind::Rastrigin => (vec![0.0; d], 0.0),
        }
    }

    fn value(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkKind::Branin => branin(x[0], x[1]),
            BenchmarkKind::CrossInTray => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let exponent = (100.0 - r / PI).abs();
                let amplitude = (x[0].sin() * x[1].sin()).abs();
                // Far from the origin exp() overflows; the +1 is then negligible.
                let log_product = amplitude.ln() + exponent;
                if log_product > 700.0 {
                    -1e-4 * (0.1 * log_product).exp()
                } else {
                    -1e-4 * (amplitude * exponent.exp() + 1.0).powf(0.1)
                }
            }
            BenchmarkKind::Dropwave => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                -(1.0 + (12.0 * r2.sqrt()).cos()) / (0.5 * r2 + 2.0)
            }
            BenchmarkKind::Sphere => x.iter().map(|v| v * v).sum(),
            BenchmarkKind::Ackley => {
                let d = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
                let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E
            }
            BenchmarkKind::Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let head = (PI * w[0]).sin().powi(2);
                let middle: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                head + middle + tail
            }
            BenchmarkKind::Rastrigin => {
                10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
        }
    }
}

fn branin(x1: f64, x2: f64) -> f64 {
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let t = 1.0 / (8.0 * PI);
    (x2 - b * x1 * x1 + c * x1 - 6.0).powi(2) + 10.0 * (1.0 - t) * x1.cos() + 10.0
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let key = match key.as_str() {
            "crossintray" | "cross-in-tray" => "cross-in-tray",
            "drop-wave" | "dropwave" => "dropwave",
            other => other,
        }
        .to_string();
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::UnknownBenchmark(s.to_string()))
    }
}

/// A test function instantiated in a particular dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub kind: BenchmarkKind,
    pub dimension: usize,
    pub bounds: Vec<(f64, f64)>,
    pub global_minimum_value: f64,
    /// One known global minimizer.
    pub minimizer: Vec<f64>,
    pub success_tolerance: f64,
}

impl BenchmarkSpec {
    pub fn new(kind: BenchmarkKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension", "must be positive"));
        }
        if let Some(fixed) = kind.fixed_dimension() {
            if dimension != fixed {
                return Err(Error::invalid(
                    "dimension",
                    format!("{kind} is only defined for d = {fixed}"),
                ));
            }
        }
        let (minimizer, global_minimum_value) = kind.minimum(dimension);
        Ok(BenchmarkSpec {
            kind,
            dimension,
            bounds: kind.bounds(dimension),
            global_minimum_value,
            minimizer,
            success_tolerance: SUCCESS_TOLERANCE,
        })
    }

    /// Parses `name-dim` (e.g. `ackley-10`) or a bare name for the
    /// fixed-dimension functions.
    pub fn lookup(id: &str) -> Result<Self> {
        if let Ok(kind) = id.parse::<BenchmarkKind>() {
            return match kind.fixed_dimension() {
                Some(d) => BenchmarkSpec::new(kind, d),
                None => Err(Error::UnknownBenchmark(format!("{id} (missing dimension, e.g. {id}-10)"))),
            };
        }
        let (name, dim) = id
            .rsplit_once('-')
            .ok_or_else(|| Error::UnknownBenchmark(id.to_string()))?;
        let kind: BenchmarkKind = name.parse().map_err(|_| Error::UnknownBenchmark(id.to_string()))?;
        let dimension: usize = dim
            .trim_end_matches('d')
            .parse()
            .map_err(|_| Error::UnknownBenchmark(id.to_string()))?;
        BenchmarkSpec::new(kind, dimension)
    }

    /// Canonical identifier, `name-dim`.
    pub fn id(&self) -> String {
        format!("{}-{}", self.kind.name(), self.dimension)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::LengthMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        Ok(self.kind.value(x))
    }

    pub fn value_batch(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        points.iter().map(|x| self.value(x)).collect()
    }

    pub fn is_success(&self, achieved_value: f64) -> bool {
        achieved_value - self.global_minimum_value <= self.success_tolerance
    }

    /// Uniform draw from the sampling box.
    pub fn sample_start<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()
    }

    /// One tenth of the box diameter.
    pub fn default_sigma0(&self) -> f64 {
        crate::optimizer::sigma0_for_box(&self.bounds)
    }
}

impl Objective for BenchmarkSpec {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String> {
        self.value(x).map_err(|e| e.to_string())
    }
}

/// Every benchmark, with `dimension` used for the dimension-free ones.
pub fn registry(dimension: usize) -> Vec<BenchmarkSpec> {
    BenchmarkKind::ALL
        .into_iter()
        .filter_map(|k| BenchmarkSpec::new(k, k.fixed_dimension().unwrap_or(dimension)).ok())
        .collect()
}

pub fn is_success(spec: &BenchmarkSpec, achieved_value: f64) -> bool {
    spec.is_success(achieved_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimizers_attain_minima() {
        for d in [1, 2, 5, 10, 100] {
            for spec in registry(d) {
                let v = spec.value(&spec.minimizer).unwrap();
                assert!((v - spec.global_minimum_value).abs() < 1e-9, "{}: {v}", spec.id());
                assert!(spec.bounds.iter().all(|(lo, hi)| lo < hi));
            }
        }
    }

    #[test]
    fn documented_values() {
        let sphere = BenchmarkSpec::lookup("sphere-7").unwrap();
        assert_eq!(sphere.value(&[0.0; 7]).unwrap(), 0.0);
        let rastrigin = BenchmarkSpec::lookup("rastrigin-10").unwrap();
        assert_eq!(rastrigin.value(&[0.0; 10]).unwrap(), 0.0);
        let branin = BenchmarkSpec::lookup("branin").unwrap();
        assert!((branin.value(&[PI, 2.275]).unwrap() - 0.397887).abs() < 1e-5);
        for (a, b) in [(-PI, 12.275), (3.0 * PI, 2.475)] {
            assert!((branin.value(&[a, b]).unwrap() - 0.397887).abs() < 1e-5);
        }
        let cross = BenchmarkSpec::lookup("cross-in-tray").unwrap();
        for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let v = cross.value(&[sx * 1.3491, sy * 1.3491]).unwrap();
            assert!((v + 2.06261).abs() < 1e-5);
        }
    }

    #[test]
    fn success_predicate() {
        let sphere = BenchmarkSpec::lookup("sphere-10").unwrap();
        assert!(sphere.is_success(5e-5));
        let ackley = BenchmarkSpec::lookup("ackley-10").unwrap();
        assert!(!ackley.is_success(2e-4));
        let cross = BenchmarkSpec::lookup("cross-in-tray").unwrap();
        assert!(is_success(&cross, -2.06261));
    }

    #[test]
    fn lookup_forms() {
        assert_eq!(BenchmarkSpec::lookup("ackley-10").unwrap().dimension, 10);
        assert_eq!(BenchmarkSpec::lookup("Rastrigin-1000").unwrap().dimension, 1000);
        assert_eq!(BenchmarkSpec::lookup("levy-5d").unwrap().dimension, 5);
        assert_eq!(BenchmarkSpec::lookup("branin-2").unwrap().kind, BenchmarkKind::Branin);
        assert_eq!(BenchmarkSpec::lookup("dropwave").unwrap().id(), "dropwave-2");
        assert!(matches!(BenchmarkSpec::lookup("rosenbrock-3"), Err(Error::UnknownBenchmark(_))));
        assert!(BenchmarkSpec::lookup("ackley").is_err());
        assert!(BenchmarkSpec::lookup("branin-3").is_err());
        assert!(BenchmarkSpec::lookup("sphere-0").is_err());
    }

    #[test]
    fn wrong_length_errors() {
        let ackley = BenchmarkSpec::lookup("ackley-3").unwrap();
        assert!(ackley.value(&[0.0; 2]).is_err());
        assert!(ackley.evaluate(&[0.0; 4]).is_err());
    }

    #[test]
    fn sigma0_is_a_tenth_of_the_diagonal() {
        let s = BenchmarkSpec::lookup("sphere-10").unwrap();
        assert!((s.default_sigma0() - 10.24 * 10f64.sqrt() / 10.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn even_functions(x in proptest::collection::vec(-5.0f64..5.0, 2)) {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            for name in ["ackley-2", "rastrigin-2", "sphere-2", "dropwave"] {
                let spec = BenchmarkSpec::lookup(name).unwrap();
                let a = spec.value(&x).unwrap();
                let b = spec.value(&neg).unwrap();
                prop_assert!((a - b).abs() <= 1e-12, "{} {} {}", name, a, b);
            }
        }

        #[test]
        fn batch_matches_scalar(points in proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, 4), 1..8)) {
            for spec in registry(4).into_iter().filter(|s| s.dimension == 4) {
                let batch = spec.value_batch(&points).unwrap();
                for (p, b) in points.iter().zip(&batch) {
                    prop_assert_eq!(spec.value(p).unwrap().to_bits(), b.to_bits());
                }
            }
        }

        #[test]
        fn samples_stay_in_the_box(seed in 0u64..1000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for spec in registry(3) {
                let x = spec.sample_start(&mut rng);
                prop_assert!(x.iter().zip(&spec.bounds).all(|(v, (lo, hi))| lo <= v && v < hi));
            }
        }
    }
}
