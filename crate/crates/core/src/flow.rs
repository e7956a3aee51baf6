//! Gaussian states, quadratic surrogates and the closed-form quadratic flow.

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest exponent accepted by [`flow_step`] before reporting overflow.
pub const MAX_EXPONENT: f64 = 700.0;

/// Mean and standard deviation of a Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GaussianState {
    pub mu: f64,
    pub sigma: f64,
}

impl GaussianState {
    pub fn new(mu: f64, sigma: f64) -> Self {
        debug_assert!(sigma > 0.0 && mu.is_finite() && sigma.is_finite());
        Self { mu, sigma }
    }

    pub fn ln_density(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        -0.5 * z * z - self.sigma.ln() - LN_SQRT_2PI
    }

    pub fn density(&self, x: f64) -> f64 {
        self.ln_density(x).exp()
    }
}

/// `q(x) = a + b x + c x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct QuadModel {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadModel {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a + x * (self.b + x * self.c)
    }

    /// Whether `c` is small enough that the flow is treated as linear.
    pub fn is_flat(&self) -> bool {
        self.c.abs() < 1e-12 * self.b.abs().max(1.0)
    }

    /// Minimizer of `q` when it is strictly convex.
    pub fn vertex(&self) -> Option<f64> {
        (self.c > 0.0).then(|| -self.b / (2.0 * self.c))
    }
}

/// Gradient of the relaxed functional of `q` with respect to `(mu, sigma)`.
pub fn grad_f_quadratic(q: &QuadModel, s: &GaussianState) -> (f64, f64) {
    (q.b + 2.0 * q.c * s.mu, 2.0 * q.c * s.sigma)
}

/// Exact solution of the gradient flow of `q` after time `t`.
pub fn flow_step(q: &QuadModel, s: &GaussianState, t: f64) -> Result<GaussianState> {
    if q.is_flat() {
        return Ok(GaussianState { mu: s.mu - q.b * t, sigma: s.sigma });
    }
    let exponent = -2.0 * q.c * t;
    if exponent > MAX_EXPONENT {
        return Err(Error::FlowOverflow { exponent });
    }
    let em1 = exponent.exp_m1();
    let decay = exponent.exp();
    Ok(GaussianState {
        mu: q.b * em1 / (2.0 * q.c) + s.mu * decay,
        sigma: s.sigma * decay,
    })
}

/// Flow step with the time step capped at `h_max`.
///
/// When `t > h_max` and `c >= 0` the state at `h_max` is additionally
/// contracted by `vartheta`, so flat or convex surrogates always shrink sigma.
/// A flat surrogate counts as `c = 0` whatever the sign of its round-off.
pub fn flow_step_clamped(
    q: &QuadModel,
    s: &GaussianState,
    t: f64,
    h_max: f64,
    vartheta: f64,
) -> Result<GaussianState> {
    if t > h_max && (q.is_flat() || q.c >= 0.0) {
        if q.is_flat() {
            return Ok(GaussianState { mu: s.mu - q.b * h_max, sigma: vartheta * s.sigma });
        }
        let factor = vartheta * (-2.0 * q.c * h_max).exp();
        return Ok(GaussianState {
            mu: q.b * (factor - 1.0) / (2.0 * q.c) + s.mu * factor,
            sigma: factor * s.sigma,
        });
    }
    flow_step(q, s, t.min(h_max))
}

/// Raw moments `E[X^k]`, `k = 0..=n`, of `N(mu, sigma^2)`.
pub fn gaussian_moments(s: &GaussianState, n: usize) -> Vec<f64> {
    let mut m = Vec::with_capacity(n + 1);
    m.push(1.0);
    if n >= 1 {
        m.push(s.mu);
    }
    let var = s.sigma * s.sigma;
    for k in 2..=n {
        let next = s.mu * m[k - 1] + (k - 1) as f64 * var * m[k - 2];
        m.push(next);
    }
    m
}

/// Relaxed functional of the polynomial `sum coeffs[k] x^k`.
pub fn relaxed_f_polynomial(coeffs: &[f64], s: &GaussianState) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    gaussian_moments(s, coeffs.len() - 1)
        .iter()
        .zip(coeffs)
        .map(|(m, c)| m * c)
        .sum()
}
