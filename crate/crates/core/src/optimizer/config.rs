use crate::step::StepParams;
use crate::{Error, Result};

/// Optimizer parameters. Lengths marked "relative" are multiplied by the domain width.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunConfig {
    /// Size of the first sample.
    pub n0: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Largest time step taken in one iteration.
    pub h_max: f64,
    /// Evaluation cap per boosting cycle.
    pub max_evals: u64,
    /// Iteration cap per boosting cycle.
    pub max_iters: u64,
    /// Target standard deviation (relative).
    pub sigma_target: f64,
    /// Standard deviation floor (relative).
    pub sigma_min: f64,
    /// Tolerance on the standard deviation of sampled values for interior convergence.
    pub delta_f: f64,
    /// Interior points are farther than `kappa * sigma` from the boundary.
    pub kappa: f64,
    /// Thinning probability applied to rejection-sampling acceptance.
    pub p: f64,
    pub step: StepParams,
    /// Extra contraction of sigma on clamped steps and boundary projections.
    pub vartheta: f64,
    /// Extension slope times the domain width.
    pub varpi: f64,
    pub boosting_cycles: usize,
    pub boosting_random_restart: bool,
    pub max_restarts: usize,
    pub rejection_sampling: bool,
    pub adaptivity: bool,
    pub sparse_sampling: bool,
    pub restart: bool,
    pub postprocess: bool,
    /// Stop on `sigma <= sigma_target` alone; for noisy objectives.
    pub noisy: bool,
    pub record_trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n0: 10,
            n_min: 6,
            n_max: 10,
            h_max: 1000.0,
            max_evals: 1000,
            max_iters: 1000,
            sigma_target: 5e-5,
            sigma_min: 1e-8,
            delta_f: 1.25e-6,
            kappa: 1.0,
            p: 0.75,
            step: StepParams::default(),
            vartheta: 0.95,
            varpi: 10.0,
            boosting_cycles: 0,
            boosting_random_restart: true,
            max_restarts: 10,
            rejection_sampling: true,
            adaptivity: true,
            sparse_sampling: true,
            restart: true,
            postprocess: true,
            noisy: false,
            record_trace: false,
        }
    }
}

impl RunConfig {
    /// Settings used for noisy objectives: single stopping rule, no restart,
    /// sparse sampling or adaptivity.
    pub fn noisy() -> Self {
        Self {
            noisy: true,
            restart: false,
            sparse_sampling: false,
            adaptivity: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_min < 3 || self.n0 < 3 || self.n_max < self.n_min {
            return bad(format!(
                "sample sizes need 3 <= nmin <= nmax and n0 >= 3 (n0={}, nmin={}, nmax={})",
                self.n0, self.n_min, self.n_max
            ));
        }
        for (name, v) in [
            ("hmax", self.h_max),
            ("sigmatarget", self.sigma_target),
            ("sigmamin", self.sigma_min),
            ("tolf", self.delta_f),
            ("kappa", self.kappa),
            ("penalty", self.varpi),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad(format!("prob must lie in (0, 1], got {}", self.p));
        }
        if !(self.vartheta > 0.0 && self.vartheta < 1.0) {
            return bad(format!("aggregation must lie in (0, 1), got {}", self.vartheta));
        }
        if self.max_evals == 0 || self.max_iters == 0 {
            return bad("fvalmax and maxiterations must be positive".into());
        }
        self.step.validate().map_err(Error::Config)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: expected a number, got {value:?}")))
        };
        let int = || {
            value
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{key}: expected an integer, got {value:?}")))
        };
        let flag = || match value.to_ascii_lowercase().as_str() {
            "true" | "on" | "yes" | "1" => Ok(true),
            "false" | "off" | "no" | "0" => Ok(false),
            _ => Err(Error::Config(format!("{key}: expected true or false, got {value:?}"))),
        };
        match key.as_str() {
            "n0" => self.n0 = int()? as usize,
            "nmin" => self.n_min = int()? as usize,
            "nmax" => self.n_max = int()? as usize,
            "hmax" => self.h_max = num()?,
            "fvalmax" => self.max_evals = int()?,
            "maxiterations" => self.max_iters = int()?,
            "sigmatarget" => self.sigma_target = num()?,
            "sigmamin" => self.sigma_min = num()?,
            "tolf" => self.delta_f = num()?,
            "kappa" => self.kappa = num()?,
            "prob" => self.p = num()?,
            "gamma1" => self.step.gamma1 = num()?,
            "gamma2" => self.step.gamma2 = num()?,
            "upsilon1" => self.step.upsilon1 = num()?,
            "upsilon2" => self.step.upsilon2 = num()?,
            "m" => self.step.m = num()?,
            "aggregation" => self.vartheta = num()?,
            "penalty" => self.varpi = num()?,
            "boosting" => self.boosting_cycles = int()? as usize,
            "boostingrandomrestart" => self.boosting_random_restart = flag()?,
            "maxrestarts" => self.max_restarts = int()? as usize,
            "rejectionsampling" => self.rejection_sampling = flag()?,
            "adaptivity" => self.adaptivity = flag()?,
            "sparsesampling" => self.sparse_sampling = flag()?,
            "restart" | "restarting" => self.restart = flag()?,
            "postprocessing" | "postprocess" => self.postprocess = flag()?,
            "noisy" => self.noisy = flag()?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses flat `key = value` lines over the defaults; `#` starts a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies flat `key = value` lines on top of `self` without validating.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}
