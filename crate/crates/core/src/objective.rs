//! Objective wrapper: domain, linear extension, evaluation counting and noise.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Grid resolution used by [`Objective::normalize`] in the benchmark harness.
pub const NORMALIZATION_GRID: usize = 10_001;

/// Closed interval `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidDomain { x_min, x_max });
        }
        Ok(Self { x_min, x_max })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.x_min, self.x_max)
    }

    /// Boundary point closest to `x`; ties go to `x_min`.
    pub fn nearest_boundary(&self, x: f64) -> f64 {
        if (x - self.x_min).abs() <= (self.x_max - x).abs() {
            self.x_min
        } else {
            self.x_max
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn boundary_distance(&self, x: f64) -> f64 {
        (x - self.x_min).min(self.x_max - x)
    }

    /// `n` equispaced points covering the domain including both ends.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let h = self.width() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i == n - 1 {
                self.x_max
            } else {
                self.x_min + i as f64 * h
            }
        })
    }
}

pub type ObjFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Result of [`Objective::normalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub scale: f64,
    pub degenerate: bool,
}

/// A black-box `f` on a [`Domain`], extended linearly to the real line.
///
/// Outside the domain the extension is `f(x_min) + nu (x_min - x)` on the left
/// and `f(x_max) + nu (x - x_max)` on the right, with `nu = varpi / width`.
/// Every call to [`evaluate`](Self::evaluate) counts as one evaluation.
#[derive(Clone)]
pub struct Objective {
    f: ObjFn,
    domain: Domain,
    varpi: f64,
    scale: f64,
    noise_level: f64,
    rng: ChaCha8Rng,
    evals: u64,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("domain", &self.domain)
            .field("varpi", &self.varpi)
            .field("scale", &self.scale)
            .field("noise_level", &self.noise_level)
            .field("evals", &self.evals)
            .finish()
    }
}

impl Objective {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, domain: Domain) -> Self {
        Self::from_arc(Arc::new(f), domain)
    }

    pub fn from_arc(f: ObjFn, domain: Domain) -> Self {
        Self {
            f,
            domain,
            varpi: 10.0,
            scale: 1.0,
            noise_level: 0.0,
            rng: ChaCha8Rng::seed_from_u64(0),
            evals: 0,
        }
    }

    /// Sets the extension slope scale; the slope is `varpi / width`.
    pub fn with_varpi(mut self, varpi: f64) -> Self {
        self.set_varpi(varpi);
        self
    }

    pub fn set_varpi(&mut self, varpi: f64) {
        assert!(varpi > 0.0 && varpi.is_finite(), "varpi must be positive");
        self.varpi = varpi;
    }

    /// Adds `zeta * N(0, 1)` to every evaluation, drawn from a generator seeded by `seed`.
    pub fn with_noise(mut self, zeta: f64, seed: u64) -> Self {
        self.set_noise(zeta, seed);
        self
    }

    pub fn set_noise(&mut self, zeta: f64, seed: u64) {
        assert!(zeta >= 0.0 && zeta.is_finite(), "noise level must be nonnegative");
        self.noise_level = zeta;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "scale must be positive");
        self.scale = scale;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn slope(&self) -> f64 {
        self.varpi / self.domain.width()
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn reset_evals(&mut self) {
        self.evals = 0;
    }

    /// Rescales `f` so that its oscillation over a uniform grid is one.
    ///
    /// Grid evaluations are not counted. A constant function keeps scale 1 and
    /// is reported as degenerate.
    pub fn normalize(&mut self, grid_points: usize) -> Result<Normalization> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in self.domain.grid(grid_points) {
            let v = (self.f)(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { x });
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let spread = hi - lo;
        let norm = if spread > 0.0 {
            Normalization { scale: 1.0 / spread, degenerate: false }
        } else {
            Normalization { scale: 1.0, degenerate: true }
        };
        self.scale = norm.scale;
        Ok(norm)
    }

    /// Noiseless, uncounted value of the scaled extension.
    pub fn value(&self, x: f64) -> Result<f64> {
        let d = self.domain;
        let nu = self.slope();
        let (base, x0, dist) = if x < d.x_min {
            (d.x_min, d.x_min, d.x_min - x)
        } else if x > d.x_max {
            (d.x_max, d.x_max, x - d.x_max)
        } else {
            (x, x, 0.0)
        };
        let v = (self.f)(base);
        if !v.is_finite() {
            return Err(Error::NonFinite { x: x0 });
        }
        Ok(self.scale * v + nu * dist)
    }

    /// Counted evaluation of the extension, with noise if configured.
    pub fn evaluate(&mut self, x: f64) -> Result<f64> {
        self.evals += 1;
        let mut v = self.value(x)?;
        if self.noise_level > 0.0 {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            v += self.noise_level * z;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> Objective {
        Objective::new(|x| x * x, Domain::new(-1.0, 1.0).unwrap())
    }

    #[test]
    fn extension_right_of_domain() {
        let mut obj = square();
        assert_relative_eq!(obj.slope(), 5.0);
        assert_relative_eq!(obj.evaluate(2.0).unwrap(), 6.0);
        assert_relative_eq!(obj.evaluate(-3.0).unwrap(), 11.0);
    }

    #[test]
    fn interior_and_boundary_values() {
        let mut obj = square();
        assert_eq!(obj.evaluate(0.5).unwrap(), 0.25);
        assert_eq!(obj.evals(), 1);
        assert_eq!(obj.evaluate(-1.0).unwrap(), 1.0);
        let eps = 1e-8;
        assert!((obj.evaluate(-1.0 - eps).unwrap() - 1.0).abs() <= (5.0 + 2.0) * eps);
    }

    #[test]
    fn counter_is_exact() {
        let mut obj = square();
        for k in 0..37 {
            obj.evaluate(k as f64 * 0.1).unwrap();
        }
        obj.value(0.3).unwrap();
        assert_eq!(obj.evals(), 37);
    }

    #[test]
    fn normalize_linear_and_constant() {
        let mut obj = Objective::new(|x| 2.0 * x, Domain::new(0.0, 1.0).unwrap());
        let n = obj.normalize(NORMALIZATION_GRID).unwrap();
        assert_relative_eq!(n.scale, 0.5);
        assert!(!n.degenerate);
        assert_eq!(obj.evals(), 0);

        let mut zero = Objective::new(|_| 0.0, Domain::new(-3.0, 3.0).unwrap());
        let n = zero.normalize(NORMALIZATION_GRID).unwrap();
        assert_eq!(n, Normalization { scale: 1.0, degenerate: true });
    }

    #[test]
    fn normalize_parabola() {
        let mut obj = Objective::new(|x| x * x, Domain::new(-5.12, 5.12).unwrap());
        let n = obj.normalize(NORMALIZATION_GRID).unwrap();
        // The grid contains both endpoints and zero, so the oscillation is exact.
        assert_relative_eq!(n.scale, 1.0 / (5.12 * 5.12), max_relative = 1e-14);
        assert_relative_eq!(obj.evaluate(5.12).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn non_finite_is_an_error() {
        let mut obj = Objective::new(|x| 1.0 / x, Domain::new(-1.0, 1.0).unwrap());
        assert_eq!(obj.evaluate(0.0), Err(Error::NonFinite { x: 0.0 }));
    }

    #[test]
    fn noise_is_reproducible() {
        let mk = || Objective::new(|x| x, Domain::new(0.0, 1.0).unwrap()).with_noise(0.1, 42);
        let (mut a, mut b) = (mk(), mk());
        let va: Vec<f64> = (0..5).map(|_| a.evaluate(0.5).unwrap()).collect();
        let vb: Vec<f64> = (0..5).map(|_| b.evaluate(0.5).unwrap()).collect();
        assert_eq!(va, vb);
        assert!(va.iter().any(|&v| v != 0.5));
    }

    #[test]
    fn invalid_domain() {
        assert!(Domain::new(1.0, 1.0).is_err());
        assert!(Domain::new(0.0, f64::INFINITY).is_err());
    }
}
