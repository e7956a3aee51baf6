//! Luus–Jaakola local random search with occasional uniform global draws.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Evaluator, Halt};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSearchParams {
    /// Initial neighborhood half-width as a fraction of the domain width.
    pub initial_radius: f64,
    /// Radius factor applied after each unsuccessful local draw.
    pub shrink: f64,
    /// Probability of drawing uniformly over the whole domain instead.
    pub global_probability: f64,
}

impl Default for RandomSearchParams {
    fn default() -> Self {
        Self { initial_radius: 0.5, shrink: 0.95, global_probability: 0.1 }
    }
}

impl RandomSearchParams {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.initial_radius > 0.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && (0.0..=1.0).contains(&self.global_probability);
        if ok { Ok(()) } else { Err(Error::Config(format!("invalid random search parameters {self:?}"))) }
    }
}

pub(super) fn run<R: Rng>(
    ev: &mut Evaluator<'_>,
    p: &RandomSearchParams,
    tol: f64,
    iters: &mut u64,
    rng: &mut R,
) -> Result<(), Halt> {
    let mut x = ev.uniform(rng);
    let mut fx = ev.eval(x)?;
    let mut r = p.initial_radius * ev.width();
    while r > tol * ev.width() {
        ev.spread = r;
        *iters += 1;
        let global = rng.random_bool(p.global_probability);
        let y = if global { ev.uniform(rng) } else { ev.reflect(x + rng.random_range(-r..=r)) };
        let fy = ev.eval(y)?;
        if fy < fx {
            (x, fx) = (y, fy);
        } else if !global {
            r *= p.shrink;
        }
    }
    ev.spread = r;
    Ok(())
}
