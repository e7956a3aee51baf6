//! Sample store and rejection sampling of past evaluations.

use std::fmt::Write as _;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::flow::GaussianState;
use crate::objective::Objective;
use crate::{Error, Result};

/// One past evaluation together with the Gaussian it was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleQuad {
    pub x: f64,
    pub fx: f64,
    pub mu_src: f64,
    pub sigma_src: f64,
}

impl SampleQuad {
    pub fn source(&self) -> GaussianState {
        GaussianState { mu: self.mu_src, sigma: self.sigma_src }
    }
}

/// Every evaluation made so far, in evaluation order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleStore {
    entries: Vec<SampleQuad>,
}

impl SampleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[SampleQuad] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, quad: SampleQuad) {
        self.entries.push(quad);
    }

    /// One `x,fx,mu_src,sigma_src` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 64);
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", e.x, e.fx, e.mu_src, e.sigma_src);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::Store { line: i + 1, reason };
            let fields = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| err(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let [x, fx, mu_src, sigma_src] = fields[..] else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            if !(x.is_finite() && fx.is_finite() && mu_src.is_finite())
                || !(sigma_src > 0.0 && sigma_src.is_finite())
            {
                return Err(err("non-finite value or nonpositive sigma".into()));
            }
            entries.push(SampleQuad { x, fx, mu_src, sigma_src });
        }
        Ok(Self { entries })
    }
}

/// Points `(x, f(x))` distributed as the Gaussian they were drawn for.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sample {
    pub points: Vec<(f64, f64)>,
    /// Number of points that required a new evaluation.
    pub fresh: usize,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Log of the envelope constant `M_k = sup Γ_target / Γ_source`, or `None` when unbounded.
fn ln_envelope(source: &GaussianState, target: &GaussianState) -> Option<f64> {
    if target.sigma >= source.sigma {
        return None;
    }
    let (sk2, sj2) = (source.sigma * source.sigma, target.sigma * target.sigma);
    let d = target.mu - source.mu;
    Some((source.sigma / target.sigma).ln() + d * d / (2.0 * (sk2 - sj2)))
}

/// Probability of accepting `candidate` as a draw from `target`.
///
/// Zero unless `target` is strictly narrower than the candidate's source.
pub fn acceptance_ratio(candidate: &SampleQuad, target: &GaussianState, p: f64) -> f64 {
    let source = candidate.source();
    match ln_envelope(&source, target) {
        None => 0.0,
        Some(ln_m) => {
            let ln_pi = target.ln_density(candidate.x) - ln_m - source.ln_density(candidate.x);
            p * ln_pi.exp().clamp(0.0, 1.0)
        }
    }
}

/// Draws `n` points from `target`, reusing store entries when `reuse` is set.
///
/// Each store entry is accepted independently with [`acceptance_ratio`]. If at
/// least `n` are accepted a uniform subset of size `n` is returned; otherwise
/// all accepted points are kept and the deficit is filled with fresh draws,
/// which are evaluated and appended to the store.
pub fn draw_sample<R: Rng + ?Sized>(
    store: &mut SampleStore,
    target: &GaussianState,
    n: usize,
    p: f64,
    reuse: bool,
    obj: &mut Objective,
    rng: &mut R,
) -> Result<Sample> {
    let mut points = Vec::with_capacity(n);
    if reuse {
        let accepted: Vec<(f64, f64)> = store
            .entries
            .iter()
            .filter(|e| {
                let a = acceptance_ratio(e, target, p);
                a > 0.0 && rng.random::<f64>() < a
            })
            .map(|e| (e.x, e.fx))
            .collect();
        if accepted.len() >= n {
            let picks = index::sample(rng, accepted.len(), n);
            points.extend(picks.iter().map(|i| accepted[i]));
            return Ok(Sample { points, fresh: 0 });
        }
        points = accepted;
    }
    let fresh = n - points.len();
    let normal = Normal::new(target.mu, target.sigma).expect("valid gaussian");
    for _ in 0..fresh {
        let x = normal.sample(rng);
        let fx = obj.evaluate(x)?;
        store.push(SampleQuad { x, fx, mu_src: target.mu, sigma_src: target.sigma });
        points.push((x, fx));
    }
    Ok(Sample { points, fresh })
}

/// Importance weight `Γ_current(x) / Γ_fit(x)` for a point drawn from `fit_state`.
pub fn likelihood(x: f64, fit_state: &GaussianState, current_state: &GaussianState) -> f64 {
    if fit_state == current_state {
        return 1.0;
    }
    (current_state.ln_density(x) - fit_state.ln_density(x)).exp()
}
