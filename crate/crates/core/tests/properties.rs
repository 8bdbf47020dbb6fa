use asgf::linalg::{dot, gram_deviation};
use asgf::optimizer::random_orthonormal_basis;
use asgf::smoothing::{assemble_gradient, directional_derivative};
use asgf::{gauss_hermite_rule, minimize, AsgfConfig, Counted, FnObjective, Objective};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn smoothed_gradient(objective: &dyn Objective, x: &[f64], sigma: f64, seed: u64) -> Vec<f64> {
    let c = Counted::new(objective);
    let basis = random_orthonormal_basis(x.len(), &mut ChaCha8Rng::seed_from_u64(seed));
    let rule = gauss_hermite_rule(5).unwrap();
    let samples: Vec<_> = basis
        .iter()
        .map(|xi| directional_derivative(&c, x, sigma, xi, &rule).unwrap())
        .collect();
    assemble_gradient(&samples).unwrap()
}

fn wavy(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| (v * (i + 1) as f64).sin() + 0.1 * v * v).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rules_are_symmetric(m in 1usize..=101) {
        let rule = gauss_hermite_rule(m).unwrap();
        let n = rule.nodes();
        let w = rule.weights();
        for k in 0..m {
            prop_assert_eq!(n[k], -n[m - 1 - k]);
            prop_assert_eq!(w[k], w[m - 1 - k]);
            prop_assert!(w[k] > 0.0);
        }
        prop_assert!(n.windows(2).all(|p| p[0] < p[1]));
        let total: f64 = w.iter().sum();
        prop_assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quadratic_gradient_is_exact(
        x in prop::collection::vec(-3.0f64..3.0, 2..8),
        sigma in 0.01f64..2.0,
        seed in any::<u64>(),
    ) {
        // f(x) = Σ (i + 1) x_i² + x_0 x_1 has gradient ((2 + …)x + …).
        let d = x.len();
        let f = FnObjective::new(d, |y: &[f64]| {
            y.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum::<f64>() + y[0] * y[1]
        });
        let g = smoothed_gradient(&f, &x, sigma, seed);
        let mut exact: Vec<f64> = x.iter().enumerate().map(|(i, v)| 2.0 * (i + 1) as f64 * v).collect();
        exact[0] += x[1];
        exact[1] += x[0];
        for (a, b) in g.iter().zip(&exact) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{g:?} vs {exact:?}");
        }
    }

    #[test]
    fn translation_equivariance(
        x in prop::collection::vec(-2.0f64..2.0, 2..6),
        shift in prop::collection::vec(-5.0f64..5.0, 6),
        sigma in 0.05f64..1.0,
        seed in any::<u64>(),
    ) {
        // Gradient of f(· − t) at x + t equals that of f at x, up to rounding
        // in forming the shifted evaluation points.
        let d = x.len();
        let t = &shift[..d];
        let base = FnObjective::new(d, wavy);
        let moved = FnObjective::new(d, |y: &[f64]| {
            let back: Vec<f64> = y.iter().zip(t).map(|(a, b)| a - b).collect();
            wavy(&back)
        });
        let xt: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + b).collect();
        let g0 = smoothed_gradient(&base, &x, sigma, seed);
        let g1 = smoothed_gradient(&moved, &xt, sigma, seed);
        for (a, b) in g0.iter().zip(&g1) {
            prop_assert!((a - b).abs() < 1e-9, "{g0:?} vs {g1:?}");
        }
    }

    #[test]
    fn random_bases_are_orthonormal(d in 1usize..40, seed in any::<u64>()) {
        let b = random_orthonormal_basis(d, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(gram_deviation(&b) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn run_traces_are_consistent(
        x0 in prop::collection::vec(-4.0f64..4.0, 2..6),
        seed in any::<u64>(),
    ) {
        let d = x0.len();
        let f = FnObjective::new(d, |y: &[f64]| wavy(y) + dot(y, y));
        let c = Counted::new(&f);
        let config = AsgfConfig { rng_seed: seed, max_iterations: 200, ..Default::default() };
        let r = minimize(&c, &x0, &config).unwrap();
        prop_assert_eq!(r.trace.last().unwrap().cumulative_evaluations, c.evaluations());
        prop_assert_eq!(r.evaluations, c.evaluations());
        for w in r.trace.windows(2) {
            prop_assert!(w[1].best_value <= w[0].best_value);
            prop_assert!(w[1].cumulative_evaluations > w[0].cumulative_evaluations);
            prop_assert_eq!(w[1].iteration, w[0].iteration + 1);
        }
        prop_assert!(r.best_value <= r.trace[0].current_value);
        prop_assert_eq!(f.evaluate(&r.best_point).unwrap(), r.best_value);
    }
}
