//! Classical comparison optimizers run through the same counted objective.
//!
//! All methods work inside the domain, return the best evaluated point and
//! stop hard at `max_evals`, even mid-iteration.

mod differential_evolution;
mod nelder_mead;
mod random_search;
mod simulated_annealing;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use differential_evolution::DeParams;
pub use nelder_mead::NelderMeadParams;
pub use random_search::RandomSearchParams;
pub use simulated_annealing::AnnealingParams;

use crate::optimizer::{RunError, RunResult, StopReason};
use crate::{Error, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NelderMead,
    RandomSearch,
    DifferentialEvolution,
    SimulatedAnnealing,
    /// One uniformly drawn point; calibrates the chance level of a suite.
    UniformRandom,
}

impl Method {
    pub const COMPARISON: [Method; 4] =
        [Self::NelderMead, Self::RandomSearch, Self::DifferentialEvolution, Self::SimulatedAnnealing];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NelderMead => "nelder_mead",
            Self::RandomSearch => "random_search",
            Self::DifferentialEvolution => "differential_evolution",
            Self::SimulatedAnnealing => "simulated_annealing",
            Self::UniformRandom => "uniform_random",
        }
    }

    /// Row label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Self::NelderMead => "NelderMead",
            Self::RandomSearch => "RandomSearch",
            Self::DifferentialEvolution => "DifferentialEvolution",
            Self::SimulatedAnnealing => "SimulatedAnnealing",
            Self::UniformRandom => "UniformRandom",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "nm" | "neldermead" => Ok(Self::NelderMead),
            "rs" | "randomsearch" => Ok(Self::RandomSearch),
            "de" | "differentialevolution" => Ok(Self::DifferentialEvolution),
            "sa" | "simulatedannealing" => Ok(Self::SimulatedAnnealing),
            "uniform" | "uniformrandom" => Ok(Self::UniformRandom),
            _ => Err(format!("unknown baseline method {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub method: Method,
    pub max_evals: u64,
    /// Convergence tolerance, relative to the domain width.
    pub tolerance: f64,
    pub nelder_mead: NelderMeadParams,
    pub random_search: RandomSearchParams,
    pub differential_evolution: DeParams,
    pub annealing: AnnealingParams,
}

impl BaselineConfig {
    /// Default budget and knobs for `method`.
    pub fn new(method: Method) -> Self {
        let max_evals = match method {
            Method::NelderMead => 2000,
            Method::RandomSearch => 2000,
            Method::DifferentialEvolution => 5000,
            Method::SimulatedAnnealing => 2000,
            Method::UniformRandom => 1,
        };
        Self {
            method,
            max_evals,
            tolerance: 1e-8,
            nelder_mead: NelderMeadParams::default(),
            random_search: RandomSearchParams::default(),
            differential_evolution: DeParams::default(),
            annealing: AnnealingParams::default(),
        }
    }

    pub fn with_max_evals(mut self, max_evals: u64) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.max_evals == 0 {
            return bad("max_evals must be positive");
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return bad("tolerance must be positive");
        }
        self.nelder_mead.validate()?;
        self.random_search.validate()?;
        self.differential_evolution.validate()?;
        self.annealing.validate()
    }
}

/// Why a method loop was interrupted.
#[derive(Debug)]
enum Halt {
    Budget,
    Objective(Error),
}

/// Counted, budget-capped evaluation that remembers the best point.
struct Evaluator<'a> {
    obj: &'a mut Objective,
    start: u64,
    max_evals: u64,
    best: Option<(f64, f64)>,
    /// Method-specific measure of how far the search has contracted.
    spread: f64,
}

impl<'a> Evaluator<'a> {
    fn new(obj: &'a mut Objective, max_evals: u64) -> Self {
        let start = obj.evals();
        Self { obj, start, max_evals, best: None, spread: 0.0 }
    }

    fn used(&self) -> u64 {
        self.obj.evals() - self.start
    }

    fn width(&self) -> f64 {
        self.obj.domain().width()
    }

    fn clamp(&self, x: f64) -> f64 {
        self.obj.domain().clamp(x)
    }

    /// Mirrors `x` back into the domain, falling back to clamping.
    fn reflect(&self, x: f64) -> f64 {
        let d = self.obj.domain();
        let y = if x < d.x_min {
            2.0 * d.x_min - x
        } else if x > d.x_max {
            2.0 * d.x_max - x
        } else {
            x
        };
        d.clamp(y)
    }

    fn uniform<R: Rng>(&self, rng: &mut R) -> f64 {
        let d = self.obj.domain();
        rng.random_range(d.x_min..=d.x_max)
    }

    fn eval(&mut self, x: f64) -> Result<f64, Halt> {
        if self.used() >= self.max_evals {
            return Err(Halt::Budget);
        }
        let fx = self.obj.evaluate(x).map_err(Halt::Objective)?;
        if self.best.is_none_or(|(_, fb)| fx < fb) {
            self.best = Some((x, fx));
        }
        Ok(fx)
    }
}


/// Runs one baseline and reports it in the optimizer's result format.
pub fn run_baseline<R: Rng>(obj: &mut Objective, cfg: &BaselineConfig, rng: &mut R) -> Result<RunResult, RunError> {
    let fail = |error: Error, n_evals: u64| RunError { error, n_evals, trace: Vec::new() };
    cfg.validate().map_err(|e| fail(e, 0))?;
    let mut ev = Evaluator::new(obj, cfg.max_evals);
    let mut iters = 0u64;
    let outcome = match cfg.method {
        Method::NelderMead => nelder_mead::run(&mut ev, &cfg.nelder_mead, cfg.tolerance, &mut iters, rng),
        Method::RandomSearch => random_search::run(&mut ev, &cfg.random_search, cfg.tolerance, &mut iters, rng),
        Method::DifferentialEvolution => {
            differential_evolution::run(&mut ev, &cfg.differential_evolution, cfg.tolerance, &mut iters, rng)
        }
        Method::SimulatedAnnealing => simulated_annealing::run(&mut ev, &cfg.annealing, cfg.tolerance, &mut iters, rng),
        Method::UniformRandom => {
            let x = ev.uniform(rng);
            iters = 1;
            ev.eval(x).map(|_| ())
        }
    };
    let stop_reason = match outcome {
        Ok(()) => StopReason::ConvergedInterior,
        Err(Halt::Budget) => StopReason::MaxEvals,
        Err(Halt::Objective(e)) => return Err(fail(e, ev.used())),
    };
    let (x_out, f_out) = ev.best.expect("every method evaluates at least once");
    Ok(RunResult {
        x_out,
        f_out,
        n_evals: ev.used(),
        n_iters: iters,
        stop_reason,
        restarts: 0,
        mu_final: x_out,
        sigma_final: ev.spread,
        trace: None,
    })
}
