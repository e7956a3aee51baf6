//! The sample, fit and step loop, with stopping, restarts, postprocessing and boosting.

mod config;
mod result;

pub use config::RunConfig;
pub use result::{RunError, RunResult, StopReason, TraceRecord};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fit::fit_quadratic;
use crate::flow::{flow_step_clamped, GaussianState, QuadModel};
use crate::objective::{Domain, Objective};
use crate::sampling::{draw_sample, Sample, SampleQuad, SampleStore};
use crate::step::{budget_spend, estimate_errors, time_step, StepParams};
use crate::Error;

/// Fresh draws added one at a time after a second singular fit.
const SINGULAR_RETRIES: usize = 3;

/// Surrogate together with the sample and Gaussian it was fitted at.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub q: QuadModel,
    pub sample: Sample,
    pub theta_bar: GaussianState,
}

/// Mutable state carried from one iteration to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState {
    pub state: GaussianState,
    /// Mean before the last boundary projection; decides interior versus boundary.
    pub mu_unprojected: f64,
    pub fit: Option<Fit>,
    /// Error budget `(gamma1, gamma2)` left for fit-free steps.
    pub gamma_budget: (f64, f64),
    pub n_next: usize,
    pub sigma_grew: bool,
}

impl IterState {
    pub fn new(state: GaussianState, cfg: &RunConfig) -> Self {
        Self {
            state,
            mu_unprojected: state.mu,
            fit: None,
            gamma_budget: (cfg.step.gamma1, cfg.step.gamma2),
            n_next: cfg.n0,
            sigma_grew: false,
        }
    }

    pub fn is_interior(&self, domain: &Domain, kappa: f64) -> bool {
        domain.boundary_distance(self.mu_unprojected) > kappa * self.state.sigma
    }

    fn budget_low(&self, step: &StepParams) -> bool {
        self.gamma_budget.0 < 0.25 * step.gamma1 || self.gamma_budget.1 < 0.25 * step.gamma2
    }
}

/// Counters checked by the fail-safe stopping rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub iters: u64,
    pub evals: u64,
}

fn sample_sd(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    (points.iter().map(|p| (p.1 - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Fail-safe rules: sigma floor, iteration cap and evaluation cap.
pub fn failsafe(it: &IterState, cfg: &RunConfig, domain: &Domain, used: Budget) -> Option<StopReason> {
    if it.state.sigma < cfg.sigma_min * domain.width() {
        Some(StopReason::SigmaFloor)
    } else if used.iters >= cfg.max_iters {
        Some(StopReason::MaxIters)
    } else if used.evals >= cfg.max_evals {
        Some(StopReason::MaxEvals)
    } else {
        None
    }
}

/// Convergence tests on the current sample.
///
/// Interior: `sigma <= sigma_target` and the sampled values have standard
/// deviation at most `delta_f`. Boundary: `sigma <= sigma_target` and the
/// in-domain sample point closest to the boundary has the smallest value.
pub fn converged(it: &IterState, cfg: &RunConfig, domain: &Domain) -> Option<StopReason> {
    let fit = it.fit.as_ref()?;
    if it.state.sigma > cfg.sigma_target * domain.width() {
        return None;
    }
    let interior = it.is_interior(domain, cfg.kappa);
    if cfg.noisy {
        return Some(if interior { StopReason::ConvergedInterior } else { StopReason::ConvergedBoundary });
    }
    let points = &fit.sample.points;
    if interior {
        return (sample_sd(points) <= cfg.delta_f).then_some(StopReason::ConvergedInterior);
    }
    let xb = domain.nearest_boundary(it.state.mu);
    let inside = points.iter().filter(|p| domain.contains(p.0));
    let nearest = inside.clone().min_by(|a, b| (a.0 - xb).abs().total_cmp(&(b.0 - xb).abs()))?;
    inside
        .clone()
        .all(|p| nearest.1 <= p.1)
        .then_some(StopReason::ConvergedBoundary)
}

pub fn should_stop(it: &IterState, cfg: &RunConfig, domain: &Domain, used: Budget) -> Option<StopReason> {
    failsafe(it, cfg, domain, used).or_else(|| converged(it, cfg, domain))
}

/// Best in-domain store entry; ties go to the earliest evaluation.
pub fn best_entry(store: &SampleStore, domain: &Domain) -> Option<SampleQuad> {
    store
        .entries()
        .iter()
        .filter(|e| domain.contains(e.x))
        .fold(None, |best: Option<&SampleQuad>, e| match best {
            Some(b) if b.fx <= e.fx => Some(b),
            _ => Some(e),
        })
        .copied()
}

/// Restart point when the best evaluation lies at least one sigma from the mean.
///
/// Among equally good evaluations a point of the final sample is preferred, so
/// that flat regions do not send the search back to an early tied point.
pub fn restart_point(it: &IterState, store: &SampleStore, domain: &Domain) -> Option<GaussianState> {
    let mut best = best_entry(store, domain)?;
    if let Some(fit) = &it.fit {
        let in_final = |e: &&SampleQuad| fit.sample.points.iter().any(|&(x, fx)| x == e.x && fx == e.fx);
        if let Some(tied) = store.entries().iter().filter(|e| domain.contains(e.x) && e.fx <= best.fx).find(in_final) {
            best = *tied;
        }
    }
    let state = &it.state;
    ((best.x - state.mu).abs() >= state.sigma).then(|| GaussianState::new(best.x, best.sigma_src / 2.0))
}

/// Chooses the output among the best evaluation and surrogate-based candidates.
///
/// Interior candidates are the mean and the surrogate's vertex (if convex);
/// boundary candidates are the mean and the nearest boundary point. All are
/// projected into the domain. Only candidates other than the best point are
/// evaluated.
pub fn postprocess(
    it: &IterState,
    cfg: &RunConfig,
    obj: &mut Objective,
    best: Option<&SampleQuad>,
) -> crate::Result<(f64, f64)> {
    let domain = obj.domain();
    let mu = it.state.mu;
    let mut candidates = vec![domain.clamp(mu)];
    if it.is_interior(&domain, cfg.kappa) {
        if let Some(v) = it.fit.as_ref().and_then(|f| f.q.vertex()) {
            candidates.push(domain.clamp(v));
        }
    } else {
        candidates.push(domain.nearest_boundary(mu));
    }
    let mut out = best.map(|b| (b.x, b.fx));
    for x in candidates {
        if out.is_some_and(|(bx, _)| bx == x) {
            continue;
        }
        let fx = obj.evaluate(x)?;
        if out.is_none_or(|(_, bf)| fx < bf) {
            out = Some((x, fx));
        }
    }
    Ok(out.expect("at least one candidate"))
}

struct Engine<'a, R: Rng> {
    obj: &'a mut Objective,
    cfg: &'a RunConfig,
    store: &'a mut SampleStore,
    rng: &'a mut R,
    domain: Domain,
    evals_start: u64,
    iters: u64,
    iter_offset: u64,
    trace: Vec<TraceRecord>,
}

impl<R: Rng> Engine<'_, R> {
    fn used(&self) -> Budget {
        Budget { iters: self.iters, evals: self.obj.evals() - self.evals_start }
    }

    fn draw(&mut self, target: &GaussianState, n: usize, reuse: bool) -> crate::Result<Sample> {
        draw_sample(self.store, target, n, self.cfg.p, reuse, self.obj, self.rng)
    }

    fn refit(&mut self, it: &IterState) -> crate::Result<Fit> {
        let theta = it.state;
        let sample = self.draw(&theta, it.n_next, self.cfg.rejection_sampling)?;
        if let Ok(q) = fit_quadratic(&sample.points) {
            return Ok(Fit { q, sample, theta_bar: theta });
        }
        let mut sample = self.draw(&theta, self.cfg.n_max, false)?;
        for attempt in 0..=SINGULAR_RETRIES {
            match fit_quadratic(&sample.points) {
                Ok(q) => return Ok(Fit { q, sample, theta_bar: theta }),
                Err(_) if attempt < SINGULAR_RETRIES => {
                    let extra = self.draw(&theta, 1, false)?;
                    sample.fresh += extra.fresh;
                    sample.points.extend(extra.points);
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::SingularFit)
    }

    /// One iteration: refit if required, test convergence, then step.
    fn iterate_once(&mut self, it: &mut IterState) -> crate::Result<Option<StopReason>> {
        if let Some(reason) = failsafe(it, self.cfg, &self.domain, self.used()) {
            return Ok(Some(reason));
        }
        let sigma_target = self.cfg.sigma_target * self.domain.width();
        let refit = match &it.fit {
            None => true,
            Some(fit) => {
                let stale = fit.theta_bar != it.state;
                // A mean outside the fitted sample's one-sigma band leaves the
                // importance weights with no points to speak for it.
                let drifted = (it.state.mu - fit.theta_bar.mu).abs() > fit.theta_bar.sigma;
                !self.cfg.sparse_sampling
                    || it.budget_low(&self.cfg.step)
                    || it.sigma_grew
                    || drifted
                    || (stale && it.state.sigma <= sigma_target)
            }
        };
        let evals_before = self.obj.evals();
        if refit {
            it.fit = Some(self.refit(it)?);
            it.gamma_budget = (self.cfg.step.gamma1, self.cfg.step.gamma2);
        }
        if let Some(reason) = converged(it, self.cfg, &self.domain) {
            return Ok(Some(reason));
        }

        let fit = it.fit.as_ref().expect("fitted above");
        let q = fit.q;
        let theta = it.state;
        let mut params = self.cfg.step;
        params.gamma1 = it.gamma_budget.0;
        params.gamma2 = it.gamma_budget.1;
        let est = estimate_errors(&fit.sample.points, &q, &fit.theta_bar, &theta, &params);
        let ts = time_step(&q, &theta, &est, &params);

        it.n_next = if self.cfg.adaptivity {
            if ts.error_bound_slack() {
                self.cfg.n_min
            } else {
                self.cfg.n_max
            }
        } else {
            self.cfg.n0
        };

        let h_max = self.cfg.h_max;
        let mut next = flow_step_clamped(&q, &theta, ts.t, h_max, self.cfg.vartheta)?;
        let c = if q.is_flat() { 0.0 } else { q.c };
        let clamped = ts.t > h_max && c >= 0.0;
        let (t_eff, decay) = if clamped {
            (h_max, self.cfg.vartheta * (-2.0 * c * h_max).exp())
        } else {
            let t = ts.t.min(h_max);
            (t, (-2.0 * c * t).exp())
        };
        it.gamma_budget.0 -= budget_spend(est.eps_hat_1, c, t_eff, decay, theta.sigma);
        it.gamma_budget.1 -= budget_spend(est.eps_hat_2, c, t_eff, decay, theta.sigma);

        it.mu_unprojected = next.mu;
        if !self.domain.contains(next.mu) {
            next.mu = self.domain.clamp(next.mu);
            next.sigma *= self.cfg.vartheta;
        }
        it.sigma_grew = next.sigma > theta.sigma;

        if self.cfg.record_trace {
            self.trace.push(TraceRecord {
                iteration: self.iter_offset + self.iters,
                mu: theta.mu,
                sigma: theta.sigma,
                t: ts.t,
                n: fit.sample.len(),
                evals: evals_before - self.evals_start,
                refit,
            });
        }
        it.state = next;
        self.iters += 1;
        Ok(None)
    }

    fn inner_loop(&mut self, start: GaussianState) -> crate::Result<(IterState, StopReason)> {
        let mut it = IterState::new(start, self.cfg);
        loop {
            if let Some(reason) = self.iterate_once(&mut it)? {
                return Ok((it, reason));
            }
        }
    }

    fn run(&mut self, start: GaussianState) -> crate::Result<RunResult> {
        let mut restarts = 0;
        let (it, reason) = {
            let mut current = start;
            loop {
                let (it, reason) = self.inner_loop(current)?;
                if self.cfg.restart && !reason.is_budget() && restarts < self.cfg.max_restarts {
                    if let Some(next) = restart_point(&it, self.store, &self.domain) {
                        restarts += 1;
                        current = next;
                        continue;
                    }
                }
                break (it, reason);
            }
        };

        let (x_out, f_out) = match best_entry(self.store, &self.domain) {
            None => {
                let x = self.domain.clamp(it.state.mu);
                (x, self.obj.evaluate(x)?)
            }
            Some(b) if reason.is_failsafe() || !self.cfg.postprocess => (b.x, b.fx),
            Some(b) => postprocess(&it, self.cfg, self.obj, Some(&b))?,
        };
        Ok(RunResult {
            x_out,
            f_out,
            n_evals: self.obj.evals() - self.evals_start,
            n_iters: self.iters,
            stop_reason: reason,
            restarts,
            mu_final: it.state.mu,
            sigma_final: it.state.sigma,
            trace: None,
        })
    }
}

fn random_start<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> GaussianState {
    GaussianState::new(rng.random_range(domain.x_min..=domain.x_max), domain.width())
}

fn run_cycle<R: Rng>(
    obj: &mut Objective,
    cfg: &RunConfig,
    start: GaussianState,
    store: &mut SampleStore,
    rng: &mut R,
    iter_offset: u64,
) -> (Result<RunResult, Error>, Vec<TraceRecord>) {
    let domain = obj.domain();
    let mut engine = Engine {
        evals_start: obj.evals(),
        obj,
        cfg,
        store,
        rng,
        domain,
        iters: 0,
        iter_offset,
        trace: Vec::new(),
    };
    let out = engine.run(start);
    (out, engine.trace)
}

/// One optimization cycle (with restarts) from `init`, or from a uniform mean
/// and `sigma = width` when `init` is `None`.
pub fn run<R: Rng>(
    obj: &mut Objective,
    cfg: &RunConfig,
    init: Option<GaussianState>,
    store: &mut SampleStore,
    rng: &mut R,
) -> Result<RunResult, RunError> {
    run_boosted(obj, &RunConfig { boosting_cycles: 0, ..cfg.clone() }, init, store, rng)
}

/// Runs `cfg.boosting_cycles + 1` cycles sharing `store` and returns the best.
pub fn run_boosted<R: Rng>(
    obj: &mut Objective,
    cfg: &RunConfig,
    init: Option<GaussianState>,
    store: &mut SampleStore,
    rng: &mut R,
) -> Result<RunResult, RunError> {
    let evals_start = obj.evals();
    let fail = |error: Error, obj: &Objective, trace: Vec<TraceRecord>| RunError {
        error,
        n_evals: obj.evals() - evals_start,
        trace,
    };
    cfg.validate().map_err(|e| fail(e, obj, Vec::new()))?;
    obj.set_varpi(cfg.varpi);
    let domain = obj.domain();

    let mut trace = Vec::new();
    let mut best: Option<RunResult> = None;
    let mut iters = 0;
    for cycle in 0..=cfg.boosting_cycles {
        let start = match (cycle, init, &best) {
            (0, Some(s), _) => s,
            (0, None, _) => random_start(&domain, rng),
            (_, _, Some(prev)) if !cfg.boosting_random_restart => {
                GaussianState::new(prev.x_out, domain.width())
            }
            _ => random_start(&domain, rng),
        };
        let (out, cycle_trace) = run_cycle(obj, cfg, start, store, rng, iters);
        trace.extend(cycle_trace);
        let r = out.map_err(|e| fail(e, obj, std::mem::take(&mut trace)))?;
        iters += r.n_iters;
        if best.as_ref().is_none_or(|b| r.f_out < b.f_out) {
            best = Some(r);
        }
    }
    let mut out = best.expect("at least one cycle");
    out.n_evals = obj.evals() - evals_start;
    out.n_iters = iters;
    out.trace = cfg.record_trace.then_some(trace);
    Ok(out)
}

/// Minimizes `obj` from a random start drawn with `seed`.
pub fn minimize(obj: &mut Objective, cfg: &RunConfig, seed: u64) -> Result<RunResult, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut store = SampleStore::new();
    run_boosted(obj, cfg, None, &mut store, &mut rng)
}
