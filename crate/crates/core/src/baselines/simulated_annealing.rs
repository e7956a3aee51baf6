//! Metropolis simulated annealing with a geometric cooling schedule.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Evaluator, Halt};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealingParams {
    /// Initial temperature in units of the spread of the probe values.
    pub initial_temperature: f64,
    /// Temperature factor per proposal.
    pub cooling_rate: f64,
    /// Proposal standard deviation at the initial temperature, as a fraction
    /// of the domain width; it scales with the square root of the temperature.
    pub initial_step: f64,
    /// Uniform probes used to set the temperature scale.
    pub probes: usize,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        Self { initial_temperature: 1.0, cooling_rate: 0.995, initial_step: 0.25, probes: 10 }
    }
}

impl AnnealingParams {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.initial_temperature > 0.0
            && self.cooling_rate > 0.0
            && self.cooling_rate < 1.0
            && self.initial_step > 0.0
            && self.probes >= 1;
        if ok { Ok(()) } else { Err(Error::Config(format!("invalid annealing parameters {self:?}"))) }
    }
}

pub(super) fn run<R: Rng>(
    ev: &mut Evaluator<'_>,
    p: &AnnealingParams,
    tol: f64,
    iters: &mut u64,
    rng: &mut R,
) -> Result<(), Halt> {
    let mut probes = Vec::with_capacity(p.probes);
    for _ in 0..p.probes {
        let x = ev.uniform(rng);
        probes.push((x, ev.eval(x)?));
    }
    let mean = probes.iter().map(|q| q.1).sum::<f64>() / probes.len() as f64;
    let sd = (probes.iter().map(|q| (q.1 - mean).powi(2)).sum::<f64>() / probes.len() as f64).sqrt();
    let t0 = p.initial_temperature * if sd > 0.0 { sd } else { 1.0 };
    let (mut x, mut fx) = probes.into_iter().fold((f64::NAN, f64::INFINITY), |a, q| if q.1 < a.1 { q } else { a });
    let mut temp = t0;
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    while temp > tol * t0 {
        *iters += 1;
        let step = p.initial_step * ev.width() * (temp / t0).sqrt();
        ev.spread = step;
        let y = ev.reflect(x + step * unit.sample(rng));
        let fy = ev.eval(y)?;
        if fy <= fx || rng.random::<f64>() < (-(fy - fx) / temp).exp() {
            (x, fx) = (y, fy);
        }
        temp *= p.cooling_rate;
    }
    Ok(())
}
