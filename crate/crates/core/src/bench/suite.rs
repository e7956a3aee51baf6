//! Parallel, seed-deterministic runs of several optimizers over corpus functions.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{aggregate, compute_metrics, Metrics, RunOutcome, SuccessRule, Truth};
use super::report::{Row, Table};
use crate::baselines::{run_baseline, BaselineConfig};
use crate::corpus::{FunctionClass, TestFunction};
use crate::optimizer::{run_boosted, RunConfig, RunError};
use crate::sampling::SampleStore;

#[derive(Debug, Clone, PartialEq)]
pub enum ContenderKind {
    Flow(Box<RunConfig>),
    Baseline(BaselineConfig),
}

/// A labelled optimizer configuration taking part in a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Contender {
    pub label: String,
    pub kind: ContenderKind,
}

impl Contender {
    pub fn flow(label: impl Into<String>, cfg: RunConfig) -> Self {
        Self { label: label.into(), kind: ContenderKind::Flow(Box::new(cfg)) }
    }

    pub fn baseline(cfg: BaselineConfig) -> Self {
        Self { label: cfg.method.label().to_string(), kind: ContenderKind::Baseline(cfg) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub master_seed: u64,
    /// Runs per (optimizer, function) pair.
    pub seeds: usize,
    pub rule: SuccessRule,
    /// Additive noise level on the normalized objective.
    pub noise: f64,
    /// Record wall-clock time per run.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { master_seed: 0, seeds: 100, rule: SuccessRule::value_gap(), noise: 0.0, timing: false }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one run: FNV-1a over the master seed, optimizer label, function
/// name and run index (fields separated by `0xff`), finished with splitmix64.
pub fn run_seed(master: u64, optimizer: &str, function: &str, run_index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(&master.to_le_bytes());
    feed(&[0xff]);
    feed(optimizer.as_bytes());
    feed(&[0xff]);
    feed(function.as_bytes());
    feed(&[0xff]);
    feed(&run_index.to_le_bytes());
    splitmix64(h)
}

/// Per-function metrics for every contender.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub contenders: Vec<String>,
    pub functions: Vec<&'static str>,
    /// Indexed `[contender][function]`.
    pub metrics: Vec<Vec<Metrics>>,
}

impl SuiteResult {
    pub fn function_metrics(&self, contender: &str, function: &str) -> Option<&Metrics> {
        let c = self.contenders.iter().position(|l| l == contender)?;
        let f = self.functions.iter().position(|n| *n == function)?;
        Some(&self.metrics[c][f])
    }

    /// Class aggregate for one contender; `None` if the class has no member here.
    pub fn class_metrics(&self, contender: &str, class: &FunctionClass) -> Option<Metrics> {
        let c = self.contenders.iter().position(|l| l == contender)?;
        let parts: Vec<Metrics> = self
            .functions
            .iter()
            .zip(&self.metrics[c])
            .filter(|(name, _)| class.members().iter().any(|f| f.name == **name))
            .map(|(_, m)| *m)
            .collect();
        (!parts.is_empty()).then(|| aggregate(&parts))
    }

    /// One row per contender, aggregated over `class`.
    pub fn class_table(&self, class: &FunctionClass) -> Table {
        let rows = self
            .contenders
            .iter()
            .filter_map(|c| self.class_metrics(c, class).map(|m| Row { label: c.clone(), metrics: m }))
            .collect();
        Table { title: class.name.to_string(), label_column: "optimizer".into(), rows, show_iterations: false, show_location: false }
    }

    /// One row per function for a single contender.
    pub fn function_table(&self, contender: &str) -> Option<Table> {
        let c = self.contenders.iter().position(|l| l == contender)?;
        let rows = self
            .functions
            .iter()
            .zip(&self.metrics[c])
            .map(|(name, m)| Row { label: name.to_string(), metrics: *m })
            .collect();
        Some(Table { title: contender.to_string(), label_column: "function".into(), rows, show_iterations: false, show_location: false })
    }
}

fn run_one(contender: &Contender, function: &TestFunction, scale: f64, suite: &SuiteConfig, run_index: u64) -> Result<RunOutcome, RunError> {
    let seed = run_seed(suite.master_seed, &contender.label, function.name, run_index);
    let mut obj = function.objective().with_scale(scale);
    if suite.noise > 0.0 {
        obj.set_noise(suite.noise, splitmix64(seed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let started = suite.timing.then(Instant::now);
    let result = match &contender.kind {
        ContenderKind::Flow(cfg) => run_boosted(&mut obj, cfg, None, &mut SampleStore::new(), &mut rng),
        ContenderKind::Baseline(cfg) => run_baseline(&mut obj, cfg, &mut rng),
    }?;
    let seconds = started.map(|t| t.elapsed().as_secs_f64());
    Ok(Truth { function, scale }.outcome(&result, suite.rule, seconds))
}

/// Runs every contender `suite.seeds` times on every function.
///
/// Objectives are normalized to unit oscillation first. Runs execute in
/// parallel; results depend only on the master seed.
pub fn run_suite(contenders: &[Contender], functions: &[&'static TestFunction], suite: &SuiteConfig) -> SuiteResult {
    assert!(suite.seeds >= 1, "a suite needs at least one seed");
    let scales: Vec<f64> = functions.iter().map(|f| f.normalized_objective().1.scale).collect();
    let jobs: Vec<(usize, usize, u64)> = (0..contenders.len())
        .flat_map(|c| (0..functions.len()).flat_map(move |f| (0..suite.seeds as u64).map(move |r| (c, f, r))))
        .collect();
    let outcomes: Vec<Result<RunOutcome, RunError>> = jobs
        .par_iter()
        .map(|&(c, f, r)| run_one(&contenders[c], functions[f], scales[f], suite, r))
        .collect();
    let per_pair = outcomes.chunks(suite.seeds).map(compute_metrics).collect::<Vec<_>>();
    SuiteResult {
        contenders: contenders.iter().map(|c| c.label.clone()).collect(),
        functions: functions.iter().map(|f| f.name).collect(),
        metrics: per_pair.chunks(functions.len()).map(<[Metrics]>::to_vec).collect(),
    }
}

/// Location-scored runs at several noise levels; one row per
/// (contender, function, level), labelled `contender/function/level`.
pub fn run_noisy_suite(contenders: &[Contender], functions: &[&'static TestFunction], levels: &[f64], suite: &SuiteConfig) -> Table {
    let mut rows = Vec::new();
    for &zeta in levels {
        let cfg = SuiteConfig { noise: zeta, rule: SuccessRule::location_gap(), ..*suite };
        let result = run_suite(contenders, functions, &cfg);
        for (c, label) in result.contenders.iter().enumerate() {
            for (f, name) in result.functions.iter().enumerate() {
                rows.push(Row { label: format!("{label}/{name}/{zeta}"), metrics: result.metrics[c][f] });
            }
        }
    }
    Table { title: "noise".into(), label_column: "run".into(), rows, show_iterations: false, show_location: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::Method;
    use crate::corpus::{class, find};

    #[test]
    fn seeds_differ_by_every_field() {
        let base = run_seed(1, "a", "f", 0);
        assert_ne!(base, run_seed(2, "a", "f", 0));
        assert_ne!(base, run_seed(1, "b", "f", 0));
        assert_ne!(base, run_seed(1, "a", "g", 0));
        assert_ne!(base, run_seed(1, "a", "f", 1));
        // Field separators keep concatenations apart.
        assert_ne!(run_seed(1, "ab", "c", 0), run_seed(1, "a", "bc", 0));
        assert_eq!(base, run_seed(1, "a", "f", 0));
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of the splitmix64 generator seeded with 0.
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(splitmix64(0x9e37_79b9_7f4a_7c15), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn one_seed_one_function() {
        let dejong = find("DeJong1").unwrap();
        let suite = SuiteConfig { seeds: 1, ..SuiteConfig::default() };
        let r = run_suite(&[Contender::flow("flow", RunConfig::default())], &[dejong], &suite);
        let m = r.function_metrics("flow", "DeJong1").unwrap();
        assert_eq!(m.runs, 1);
        let table = r.class_table(&class("all").unwrap());
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].metrics, *m);
    }

    #[test]
    fn suite_is_deterministic() {
        let fs = [find("Forrester").unwrap(), find("V").unwrap()];
        let cs = [Contender::flow("flow", RunConfig::default()), Contender::baseline(BaselineConfig::new(Method::NelderMead))];
        let suite = SuiteConfig { seeds: 8, master_seed: 42, ..SuiteConfig::default() };
        let a = run_suite(&cs, &fs, &suite);
        let b = run_suite(&cs, &fs, &suite);
        assert_eq!(a.metrics, b.metrics);
        let c = run_suite(&cs, &fs, &SuiteConfig { master_seed: 43, ..suite });
        assert_ne!(a.metrics, c.metrics);
    }
}
