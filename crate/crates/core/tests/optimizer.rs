use gaussflow::corpus::find;
use gaussflow::optimizer::{run, run_boosted};
use gaussflow::{minimize, Domain, GaussianState, Objective, RunConfig, SampleQuad, SampleStore, StopReason};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn objective(f: fn(f64) -> f64, lo: f64, hi: f64) -> Objective {
    let mut obj = Objective::new(f, Domain::new(lo, hi).unwrap());
    obj.normalize(10_001).unwrap();
    obj
}

#[test]
fn zero_function_contracts_sigma_and_stops() {
    for seed in 0..50 {
        let mut obj = objective(|_| 0.0, -3.0, 3.0);
        let r = minimize(&mut obj, &RunConfig::default(), seed).unwrap();
        assert!(
            matches!(r.stop_reason, StopReason::ConvergedInterior | StopReason::ConvergedBoundary | StopReason::SigmaFloor),
            "seed {seed}: {:?}",
            r.stop_reason
        );
        assert!((-3.0..=3.0).contains(&r.x_out));
    }
}

#[test]
fn kink_is_found_every_time() {
    let mut wins = 0;
    for seed in 0..100 {
        let mut obj = objective(|x| (0.5 - x).abs(), -2.0, 2.0);
        let r = minimize(&mut obj, &RunConfig::default(), seed).unwrap();
        if obj.value(r.x_out).unwrap() <= 1e-3 {
            wins += 1;
        }
    }
    assert_eq!(wins, 100);
}

#[test]
fn decreasing_function_stops_on_the_right_boundary() {
    for seed in 0..20 {
        let mut obj = objective(|x| -x, 0.0, 1.0);
        let r = minimize(&mut obj, &RunConfig::default(), seed).unwrap();
        assert_eq!(r.stop_reason, StopReason::ConvergedBoundary, "seed {seed}");
        assert!((r.x_out - 1.0).abs() < 1e-3, "seed {seed}: {}", r.x_out);
    }
}

#[test]
fn restart_escapes_the_worse_well() {
    let f = find("Unbalanceddoublewell").unwrap();
    let mut wins = 0;
    for seed in 0..100 {
        let (mut obj, norm) = f.normalized_objective();
        let r = minimize(&mut obj, &RunConfig::default(), seed).unwrap();
        if norm.scale * (f.eval(r.x_out) - f.known_min_f) <= 1e-3 {
            wins += 1;
        }
    }
    assert!(wins >= 90, "{wins}/100");
}

#[test]
fn sparse_sampling_skips_refits() {
    let cfg = RunConfig { record_trace: true, ..Default::default() };
    let mut obj = objective(|x| x * x, -5.0, 5.0);
    let r = minimize(&mut obj, &cfg, 3).unwrap();
    let trace = r.trace.unwrap();
    assert!(trace[0].refit);
    assert!(trace.iter().any(|t| !t.refit));

    let dense = RunConfig { sparse_sampling: false, ..cfg };
    let mut obj = objective(|x| x * x, -5.0, 5.0);
    let r = minimize(&mut obj, &dense, 3).unwrap();
    assert!(r.trace.unwrap().iter().all(|t| t.refit));
}

#[test]
fn sample_sizes_follow_adaptivity() {
    let fixed = RunConfig { adaptivity: false, n0: 8, n_max: 12, record_trace: true, ..Default::default() };
    let mut obj = objective(|x| x * x + (5.0 * x).sin(), -3.0, 3.0);
    let r = minimize(&mut obj, &fixed, 1).unwrap();
    assert!(r.trace.unwrap().iter().all(|t| t.n == 8));

    let adaptive = RunConfig { n0: 8, n_min: 5, n_max: 12, record_trace: true, ..Default::default() };
    let mut obj = objective(|x| x * x + (5.0 * x).sin(), -3.0, 3.0);
    let r = minimize(&mut obj, &adaptive, 1).unwrap();
    let trace = r.trace.unwrap();
    assert_eq!(trace[0].n, 8);
    assert!(trace.iter().skip(1).filter(|t| t.refit).all(|t| t.n == 5 || t.n == 12));
}

#[test]
fn evaluation_budget_is_respected() {
    let cfg = RunConfig { max_evals: 30, ..Default::default() };
    for seed in 0..20 {
        let f = find("Schwefel").unwrap();
        let (mut obj, _) = f.normalized_objective();
        let r = minimize(&mut obj, &cfg, seed).unwrap();
        assert_eq!(r.n_evals, obj.evals());
        // The last refit may overshoot by one sample.
        assert!(r.n_evals <= 30 + cfg.n_max as u64, "seed {seed}: {}", r.n_evals);
    }
}

#[test]
fn same_seed_same_run() {
    let f = find("Deltadprime10").unwrap();
    let cfg = RunConfig { record_trace: true, boosting_cycles: 1, ..Default::default() };
    let go = || {
        let (mut obj, _) = f.normalized_objective();
        minimize(&mut obj, &cfg, 42).unwrap()
    };
    assert_eq!(go(), go());
}

#[test]
fn boosting_never_returns_a_worse_point() {
    let f = find("Schwefel").unwrap();
    for seed in 0..20 {
        let (mut obj, _) = f.normalized_objective();
        let single = minimize(&mut obj, &RunConfig::default(), seed).unwrap();
        let (mut obj, _) = f.normalized_objective();
        let boosted = minimize(&mut obj, &RunConfig { boosting_cycles: 2, ..Default::default() }, seed).unwrap();
        assert!(boosted.f_out <= single.f_out, "seed {seed}");
        assert!(boosted.n_evals >= single.n_evals);
    }
}

#[test]
fn warm_store_is_reused() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut store = SampleStore::new();
    let mut obj = objective(|x| (x - 1.0).powi(2), -4.0, 4.0);
    let cold = run(&mut obj, &RunConfig::default(), None, &mut store, &mut rng).unwrap();
    let warm_start = GaussianState::new(cold.x_out, 8.0);
    let before = obj.evals();
    let warm = run(&mut obj, &RunConfig::default(), Some(warm_start), &mut store, &mut rng).unwrap();
    assert_eq!(warm.n_evals, obj.evals() - before);
    assert!(warm.n_evals < cold.n_evals, "{} vs {}", warm.n_evals, cold.n_evals);
}

#[test]
fn objective_errors_are_reported() {
    let mut obj = Objective::new(|x: f64| if x > 0.5 { f64::NAN } else { x * x }, Domain::new(-1.0, 1.0).unwrap());
    let mut failures = 0;
    for seed in 0..10 {
        let mut store = SampleStore::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Err(e) = run_boosted(&mut obj, &RunConfig::default(), None, &mut store, &mut rng) {
            assert!(e.n_evals > 0);
            failures += 1;
        }
    }
    assert!(failures > 0);
}

#[test]
fn invalid_config_is_rejected_before_evaluating() {
    let mut obj = objective(|x| x * x, -1.0, 1.0);
    let cfg = RunConfig { p: 1.5, ..Default::default() };
    let err = minimize(&mut obj, &cfg, 0).unwrap_err();
    assert_eq!(err.n_evals, 0);
    assert_eq!(obj.evals(), 0);
}

#[test]
fn restart_reuses_the_store() {
    // A store whose best point lies far from where the flow settles.
    let mut store = SampleStore::new();
    store.push(SampleQuad { x: 2.5, fx: -1.0, mu_src: 2.5, sigma_src: 0.4 });
    let mut obj = Objective::new(|x: f64| if (x - 2.5).abs() < 1e-9 { -1.0 } else { x * x }, Domain::new(-3.0, 3.0).unwrap());
    let cfg = RunConfig { record_trace: true, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = run(&mut obj, &cfg, Some(GaussianState::new(0.0, 1.0)), &mut store, &mut rng).unwrap();
    assert!(r.restarts >= 1);
    assert_eq!(r.x_out, 2.5);
    // The restarted loop starts at the stored point with half its source width.
    let trace = r.trace.unwrap();
    let first = trace.iter().position(|t| t.mu == 2.5 && t.sigma == 0.2).expect("restart iteration");
    assert!(first > 0);
}
