//! DE/rand/1/bin.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Evaluator, Halt};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    pub population: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover rate. In one dimension the forced crossover coordinate
    /// always takes the mutant, so this has no effect.
    pub cr: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self { population: 20, f: 0.8, cr: 0.9 }
    }
}

impl DeParams {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.population >= 4 && self.f > 0.0 && self.f <= 2.0 && (0.0..=1.0).contains(&self.cr);
        if ok { Ok(()) } else { Err(Error::Config(format!("invalid differential evolution parameters {self:?}"))) }
    }
}

/// Three distinct indices, all different from `i`.
fn pick3<R: Rng>(rng: &mut R, n: usize, i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    while k < 3 {
        let j = rng.random_range(0..n);
        if j != i && !out[..k].contains(&j) {
            out[k] = j;
            k += 1;
        }
    }
    out
}

pub(super) fn run<R: Rng>(
    ev: &mut Evaluator<'_>,
    p: &DeParams,
    tol: f64,
    iters: &mut u64,
    rng: &mut R,
) -> Result<(), Halt> {
    let n = p.population;
    let mut pop = Vec::with_capacity(n);
    for _ in 0..n {
        let x = ev.uniform(rng);
        pop.push((x, ev.eval(x)?));
    }
    loop {
        let (lo, hi) = pop.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
        let (flo, fhi) =
            pop.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, fx)| (lo.min(fx), hi.max(fx)));
        ev.spread = hi - lo;
        if hi - lo <= tol * ev.width() && fhi - flo <= tol {
            return Ok(());
        }
        *iters += 1;
        for i in 0..n {
            let [a, b, c] = pick3(rng, n, i);
            let mutant = ev.reflect(pop[a].0 + p.f * (pop[b].0 - pop[c].0));
            // Binomial crossover with a forced coordinate; one dimension means the mutant.
            let _ = rng.random_bool(p.cr);
            let trial = mutant;
            let ft = ev.eval(trial)?;
            if ft <= pop[i].1 {
                pop[i] = (trial, ft);
            }
        }
    }
}
