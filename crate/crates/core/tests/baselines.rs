use asgf::{dgs_minimize, es_minimize, BenchmarkSpec, Counted, DgsConfig, EsConfig, FnObjective, StepAction};

fn parabola() -> FnObjective<impl Fn(&[f64]) -> f64 + Sync> {
    FnObjective::new(1, |x: &[f64]| x[0] * x[0])
}

fn es_config() -> EsConfig {
    EsConfig {
        sigma: 0.1,
        learning_rate: 0.01,
        sample_count: 100,
        max_iterations: 200,
        rng_seed: 5,
        target_value: None,
    }
}

#[test]
fn es_contracts_on_one_dimensional_sphere() {
    let f = parabola();
    let c = Counted::new(&f);
    let r = es_minimize(&c, &[2.0], &es_config()).unwrap();
    assert!(r.best_point[0].abs() < 2.0);
    assert_eq!(r.evaluations, 1 + 200 * 101);
    assert_eq!(r.trace.last().unwrap().cumulative_evaluations, c.evaluations());
}

#[test]
fn es_golden_trace() {
    let f = parabola();
    let c = Counted::new(&f);
    let r = es_minimize(&c, &[2.0], &es_config()).unwrap();
    let best: Vec<(usize, f64, u64)> = [1, 10, 100, 200]
        .map(|i| (i, r.trace[i].best_value, r.trace[i].cumulative_evaluations))
        .to_vec();
    assert_eq!(
        best,
        vec![
            (1, 3.454581351702716, 102),
            (10, 1.3681645484325324, 1011),
            (100, 0.0008921875935493771, 10101),
            (200, 7.845966224638909e-7, 20201),
        ]
    );
    assert_eq!(r.trace[200].current_value, 1.0561009994452995e-5);
    assert_eq!(r.best_point, vec![0.0008857745889693895]);
    assert!(r.trace[1..].iter().all(|t| t.action == StepAction::Step));
}

#[test]
fn es_stops_at_target() {
    let f = parabola();
    let c = Counted::new(&f);
    let config = EsConfig {
        target_value: Some(1e-2),
        max_iterations: 10_000,
        ..es_config()
    };
    let r = es_minimize(&c, &[2.0], &config).unwrap();
    assert!(r.best_value <= 1e-2);
    assert!(r.iterations < 200);
}

#[test]
fn dgs_near_gradient_descent_for_small_sigma() {
    // On x² the smoothed gradient is exact, so each step multiplies x by 1 − 2λ.
    // The best point is the last evaluated iterate, four steps in.
    let f = parabola();
    let c = Counted::new(&f);
    let config = DgsConfig {
        learning_rate: 0.3,
        sigma: 1e-3,
        sigma_decay: 0.0,
        max_iterations: 5,
        ..Default::default()
    };
    let r = dgs_minimize(&c, &[1.0], &config).unwrap();
    assert!((r.best_point[0].abs() - 0.4f64.powi(4)).abs() < 1e-9, "{:?}", r.best_point);
}

#[test]
fn dgs_on_ten_dimensional_sphere() {
    let spec = BenchmarkSpec::lookup("sphere-10").unwrap();
    let c = Counted::new(&spec);
    let config = DgsConfig {
        target_value: Some(spec.success_tolerance),
        ..Default::default()
    };
    let x0 = vec![3.0; 10];
    let r = dgs_minimize(&c, &x0, &config).unwrap();
    assert!(spec.is_success(r.best_value));
    assert!(r.iterations <= 500);
}
