//! Nelder–Mead on a two-vertex simplex.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Evaluator, Halt};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Initial edge length as a fraction of the domain width.
    pub initial_step: f64,
}

impl Default for NelderMeadParams {
    fn default() -> Self {
        Self { reflection: 1.0, expansion: 2.0, contraction: 0.5, shrink: 0.5, initial_step: 0.1 }
    }
}

impl NelderMeadParams {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.reflection > 0.0
            && self.expansion > 1.0
            && self.expansion > self.reflection
            && (0.0..1.0).contains(&self.contraction)
            && self.contraction > 0.0
            && (0.0..1.0).contains(&self.shrink)
            && self.shrink > 0.0
            && self.initial_step > 0.0;
        if ok { Ok(()) } else { Err(Error::Config(format!("invalid Nelder-Mead parameters {self:?}"))) }
    }
}

pub(super) fn run<R: Rng>(
    ev: &mut Evaluator<'_>,
    p: &NelderMeadParams,
    tol: f64,
    iters: &mut u64,
    rng: &mut R,
) -> Result<(), Halt> {
    let x0 = ev.uniform(rng);
    let mut x1 = ev.clamp(x0 + p.initial_step * ev.width());
    if x1 == x0 {
        x1 = ev.clamp(x0 - p.initial_step * ev.width());
    }
    let mut b = (x0, ev.eval(x0)?);
    let mut w = (x1, ev.eval(x1)?);
    loop {
        if w.1 < b.1 {
            std::mem::swap(&mut b, &mut w);
        }
        ev.spread = (w.0 - b.0).abs();
        if ev.spread <= tol * ev.width() {
            return Ok(());
        }
        *iters += 1;
        // With one remaining vertex the centroid is the best point.
        let c = b.0;
        let xr = ev.clamp(c + p.reflection * (c - w.0));
        let fr = ev.eval(xr)?;
        if fr < b.1 {
            let xe = ev.clamp(c + p.expansion * (xr - c));
            let fe = ev.eval(xe)?;
            w = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        let (xc, accept) = if fr < w.1 {
            let xc = c + p.contraction * (xr - c);
            let fc = ev.eval(xc)?;
            ((xc, fc), fc <= fr)
        } else {
            let xc = c + p.contraction * (w.0 - c);
            let fc = ev.eval(xc)?;
            ((xc, fc), fc < w.1)
        };
        if accept {
            w = xc;
        } else {
            let xs = b.0 + p.shrink * (w.0 - b.0);
            w = (xs, ev.eval(xs)?);
        }
    }
}
