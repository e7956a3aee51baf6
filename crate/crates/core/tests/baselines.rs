use gaussflow::baselines::{run_baseline, BaselineConfig, Method};
use gaussflow::corpus::{class, find};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn success_rate(method: Method, name: &str, budget: u64, seeds: u64) -> f64 {
    let f = find(name).unwrap();
    let cfg = BaselineConfig::new(method).with_max_evals(budget);
    let wins = (0..seeds)
        .filter(|&seed| {
            let (mut obj, norm) = f.normalized_objective();
            let r = run_baseline(&mut obj, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            norm.scale * (f.eval(r.x_out) - f.known_min_f) <= 1e-3
        })
        .count();
    wins as f64 / seeds as f64
}

#[test]
fn annealing_finds_the_schwefel_basin_often() {
    let pi = success_rate(Method::SimulatedAnnealing, "Schwefel", 2000, 100);
    assert!(pi >= 0.3, "{pi}");
}

#[test]
fn every_baseline_solves_the_convex_class_within_5000_evaluations() {
    for f in class("uniformly-convex").unwrap().members() {
        for method in Method::COMPARISON {
            let pi = success_rate(method, f.name, 5000, 20);
            assert_eq!(pi, 1.0, "{method} on {}", f.name);
        }
    }
}

#[test]
fn uniform_dummy_matches_the_window_fraction() {
    // One uniform draw succeeds when it lands within 5% of the width of the
    // minimizer: about 10% for a single interior minimizer.
    let f = find("DeJong1").unwrap();
    let cfg = BaselineConfig::new(Method::UniformRandom);
    let hits = (0..4000)
        .filter(|&seed| {
            let (mut obj, _) = f.normalized_objective();
            let r = run_baseline(&mut obj, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            f.min_distance(r.x_out) <= 0.05 * f.domain.width()
        })
        .count();
    let rate = hits as f64 / 4000.0;
    assert!((rate - 0.1).abs() < 0.015, "{rate}");
}
