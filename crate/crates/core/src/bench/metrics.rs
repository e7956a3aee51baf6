//! Success rules and the aggregate statistics of a set of runs.

use serde::Serialize;

use crate::corpus::TestFunction;
use crate::optimizer::{RunError, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessMode {
    /// `|f(x_out) - f_min|` on the normalized, noiseless objective.
    ValueGap,
    /// Distance to the nearest global minimizer over the domain width.
    LocationGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessRule {
    pub mode: SuccessMode,
    pub threshold: f64,
}

impl SuccessRule {
    pub const fn value_gap() -> Self {
        Self { mode: SuccessMode::ValueGap, threshold: 1e-3 }
    }

    pub const fn location_gap() -> Self {
        Self { mode: SuccessMode::LocationGap, threshold: 0.05 }
    }
}

impl Default for SuccessRule {
    fn default() -> Self {
        Self::value_gap()
    }
}

/// Known minimum of a corpus function on the scale the optimizer saw.
#[derive(Debug, Clone, Copy)]
pub struct Truth<'a> {
    pub function: &'a TestFunction,
    pub scale: f64,
}

impl Truth<'_> {
    pub fn value_gap(&self, x: f64) -> f64 {
        self.scale * (self.function.eval(x) - self.function.known_min_f).abs()
    }

    /// Distance to the nearest global minimizer over the domain width.
    pub fn location_error(&self, x: f64) -> f64 {
        self.function.min_distance(x) / self.function.domain.width()
    }

    /// Scores one run.
    pub fn outcome(&self, r: &RunResult, rule: SuccessRule, seconds: Option<f64>) -> RunOutcome {
        let gap = self.value_gap(r.x_out);
        let location_error = self.location_error(r.x_out);
        let success = match rule.mode {
            SuccessMode::ValueGap => gap <= rule.threshold,
            SuccessMode::LocationGap => location_error <= rule.threshold,
        };
        RunOutcome { n_evals: r.n_evals, n_iters: r.n_iters, gap, location_error, success, seconds }
    }
}

/// The scored summary of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOutcome {
    pub n_evals: u64,
    pub n_iters: u64,
    pub gap: f64,
    pub location_error: f64,
    pub success: bool,
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub n_f: f64,
    pub pi: f64,
    /// Infinite when no run succeeded.
    pub n_s: f64,
    pub pi_100: f64,
    pub delta: f64,
    pub delta_c: Option<f64>,
    pub n_i: f64,
    pub tau: Option<f64>,
    /// Mean distance from the output to the nearest global minimizer, over the domain width.
    pub delta_x: f64,
    pub delta_c_x: Option<f64>,
    pub runs: usize,
    pub failures: usize,
}

/// Expected evaluations until the first success when restarting on failure.
pub fn runs_per_success(n_f: f64, pi: f64) -> f64 {
    if pi > 0.0 { n_f / pi } else { f64::INFINITY }
}

/// Success probability of repeated runs within 100 evaluations.
pub fn pi_100(n_f: f64, pi: f64) -> f64 {
    if n_f <= 0.0 {
        return pi;
    }
    1.0 - (1.0 - pi).powf(100.0 / n_f)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Metrics of one function's runs; runs that errored count only as failures.
pub fn compute_metrics(runs: &[Result<RunOutcome, RunError>]) -> Metrics {
    let ok: Vec<&RunOutcome> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    assert!(!ok.is_empty(), "metrics need at least one completed run");
    let wins: Vec<&&RunOutcome> = ok.iter().filter(|o| o.success).collect();
    let n_f = mean(ok.iter().map(|o| o.n_evals as f64)).unwrap();
    let pi = wins.len() as f64 / ok.len() as f64;
    let tau = ok.iter().map(|o| o.seconds).collect::<Option<Vec<f64>>>().and_then(|s| mean(s.into_iter()));
    Metrics {
        n_f,
        pi,
        n_s: runs_per_success(n_f, pi),
        pi_100: pi_100(n_f, pi),
        delta: mean(ok.iter().map(|o| o.gap)).unwrap(),
        delta_c: mean(wins.iter().map(|o| o.gap)),
        n_i: mean(ok.iter().map(|o| o.n_iters as f64)).unwrap(),
        tau,
        delta_x: mean(ok.iter().map(|o| o.location_error)).unwrap(),
        delta_c_x: mean(wins.iter().map(|o| o.location_error)),
        runs: ok.len(),
        failures: runs.len() - ok.len(),
    }
}

/// Unweighted mean over functions, with the derived indices recomputed.
pub fn aggregate(parts: &[Metrics]) -> Metrics {
    assert!(!parts.is_empty(), "aggregate needs at least one entry");
    let avg = |g: fn(&Metrics) -> f64| mean(parts.iter().map(g)).unwrap();
    let avg_opt = |g: fn(&Metrics) -> Option<f64>| mean(parts.iter().filter_map(g));
    let n_f = avg(|m| m.n_f);
    let pi = avg(|m| m.pi);
    Metrics {
        n_f,
        pi,
        n_s: runs_per_success(n_f, pi),
        pi_100: pi_100(n_f, pi),
        delta: avg(|m| m.delta),
        delta_c: avg_opt(|m| m.delta_c),
        n_i: avg(|m| m.n_i),
        tau: parts.iter().map(|m| m.tau).collect::<Option<Vec<f64>>>().and_then(|t| mean(t.into_iter())),
        delta_x: avg(|m| m.delta_x),
        delta_c_x: avg_opt(|m| m.delta_c_x),
        runs: parts.iter().map(|m| m.runs).sum(),
        failures: parts.iter().map(|m| m.failures).sum(),
    }
}
