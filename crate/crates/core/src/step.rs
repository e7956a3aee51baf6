//! Monte Carlo error estimates and the error-controlled time step.

use crate::flow::{GaussianState, QuadModel};
use crate::sampling::likelihood;

/// Error tolerances and Taylor-validity bounds for one step.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub upsilon1: f64,
    pub upsilon2: f64,
    /// Confidence multiplier on the standard error of the gradient bias.
    pub m: f64,
}

impl Default for StepParams {
    fn default() -> Self {
        Self { gamma1: 0.2, gamma2: 0.2, upsilon1: 0.2, upsilon2: 0.2, m: 1.0 }
    }
}

impl StepParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("upsilon1", self.upsilon1),
            ("upsilon2", self.upsilon2),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(format!("m must be nonnegative, got {}", self.m));
        }
        if 1.0 + self.gamma2 + self.upsilon2 > std::f64::consts::SQRT_2 + 1e-12 {
            return Err("1 + gamma2 + upsilon2 must not exceed sqrt(2)".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct ErrorEstimates {
    /// Importance-weighted RMS of `f - q`.
    pub r_hat: f64,
    pub q_hat_1: f64,
    pub q_hat_2: f64,
    pub beta_hat_1: f64,
    pub beta_hat_2: f64,
    pub beta_bar_1: f64,
    pub beta_bar_2: f64,
    pub eps_hat_1: f64,
    pub eps_hat_2: f64,
    /// How many variance estimates were clamped at zero after cancellation.
    pub clamped_variances: u32,
}

/// Basis functions for the `mu` and `sigma` gradient components at `s`.
pub fn gradient_basis(x: f64, s: &GaussianState) -> (f64, f64) {
    let d = x - s.mu;
    let s2 = s.sigma * s.sigma;
    (d / s2, (d - s.sigma) * (d + s.sigma) / (s2 * s.sigma))
}

/// Error estimates at `current` for a surrogate fitted on a sample from `fit_state`.
pub fn estimate_errors(
    points: &[(f64, f64)],
    q: &QuadModel,
    fit_state: &GaussianState,
    current: &GaussianState,
    params: &StepParams,
) -> ErrorEstimates {
    let n = points.len() as f64;
    let (mut w, mut e2, mut eb1, mut eb2, mut e2b1, mut e2b2) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, f) in points {
        let l = likelihood(x, fit_state, current);
        let e = f - q.eval(x);
        let (b1, b2) = gradient_basis(x, current);
        w += l;
        e2 += e * e * l;
        eb1 += e * b1 * l;
        eb2 += e * b2 * l;
        e2b1 += e * e * b1 * b1 * l;
        e2b2 += e * e * b2 * b2 * l;
    }
    let mut out = ErrorEstimates::default();
    if !(w > 0.0 && w.is_finite()) {
        // Every point is negligible under the current Gaussian: no usable information.
        out.r_hat = f64::INFINITY;
        out.eps_hat_1 = f64::INFINITY;
        out.eps_hat_2 = f64::INFINITY;
        return out;
    }
    out.r_hat = (e2 / w).sqrt();
    let (g1, g2) = (params.gamma1 * params.gamma1, params.gamma2 * params.gamma2);
    out.q_hat_1 = (2.0 * g1 + 6.0 * g2).sqrt() / current.sigma;
    out.q_hat_2 = (6.0 * g1 + 26.0 * g2).sqrt() / current.sigma;
    out.beta_hat_1 = (eb1 / w).abs();
    out.beta_hat_2 = (eb2 / w).abs();
    let mut var1 = e2b1 / w - out.beta_hat_1 * out.beta_hat_1;
    let mut var2 = e2b2 / w - out.beta_hat_2 * out.beta_hat_2;
    for v in [&mut var1, &mut var2] {
        if *v < 0.0 {
            *v = 0.0;
            out.clamped_variances += 1;
        }
    }
    let root_n = n.sqrt();
    out.beta_bar_1 = out.beta_hat_1 + params.m * var1.sqrt() / root_n;
    out.beta_bar_2 = out.beta_hat_2 + params.m * var2.sqrt() / root_n;
    out.eps_hat_1 = out.r_hat * out.q_hat_1 + out.beta_bar_1;
    out.eps_hat_2 = out.r_hat * out.q_hat_2 + out.beta_bar_2;
    out
}

/// The four candidate step lengths and their minimum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TimeStep {
    pub t: f64,
    pub t_mu: f64,
    pub t_sigma: f64,
    pub t_eps1: f64,
    pub t_eps2: f64,
}

impl TimeStep {
    /// Whether the error bounds permit a longer step than the Taylor bounds.
    pub fn error_bound_slack(&self) -> bool {
        self.t_eps1.min(self.t_eps2) > self.t_mu.min(self.t_sigma)
    }
}

fn positive_or_inf(t: f64) -> f64 {
    if t > 0.0 && !t.is_nan() {
        t
    } else {
        f64::INFINITY
    }
}

/// Time for the surrogate flow to move `mu` by `upsilon1 * sigma`.
pub fn t_mu(q: &QuadModel, s: &GaussianState, upsilon1: f64) -> f64 {
    let shift = upsilon1 * s.sigma;
    if q.is_flat() {
        return if q.b == 0.0 { f64::INFINITY } else { shift / q.b.abs() };
    }
    let g = q.b + 2.0 * q.c * s.mu;
    if g == 0.0 {
        return f64::INFINITY;
    }
    // mu(t) - mu = -g (1 - e^{-2ct}) / (2c); solve for a displacement of +-shift.
    let branch = |ratio: f64| {
        if ratio > 0.0 {
            positive_or_inf(ratio.ln() / (2.0 * q.c))
        } else {
            f64::INFINITY
        }
    };
    let k = 2.0 * q.c * shift;
    branch(g / (g + k)).min(branch(g / (g - k)))
}

/// Time for sigma to change by the factor `1 -+ upsilon2`.
pub fn t_sigma(q: &QuadModel, upsilon2: f64) -> f64 {
    if q.c == 0.0 {
        return f64::INFINITY;
    }
    let arg = 1.0 - upsilon2 * q.c.signum();
    if arg > 0.0 {
        positive_or_inf(-arg.ln() / (2.0 * q.c))
    } else {
        f64::INFINITY
    }
}

/// Longest step whose propagated gradient error stays below `gamma * sigma`.
pub fn t_eps(q: &QuadModel, sigma: f64, gamma: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        return f64::INFINITY;
    }
    if q.c == 0.0 {
        return positive_or_inf(gamma * sigma / eps);
    }
    let arg = 1.0 - 2.0 * q.c * gamma * sigma / eps;
    if arg > 0.0 {
        positive_or_inf(-arg.ln() / (2.0 * q.c))
    } else {
        f64::INFINITY
    }
}

pub fn time_step(
    q: &QuadModel,
    s: &GaussianState,
    est: &ErrorEstimates,
    params: &StepParams,
) -> TimeStep {
    let t_mu = t_mu(q, s, params.upsilon1);
    let t_sigma = t_sigma(q, params.upsilon2);
    let t_eps1 = t_eps(q, s.sigma, params.gamma1, est.eps_hat_1);
    let t_eps2 = t_eps(q, s.sigma, params.gamma2, est.eps_hat_2);
    TimeStep { t: t_mu.min(t_sigma).min(t_eps1).min(t_eps2), t_mu, t_sigma, t_eps1, t_eps2 }
}

/// Fraction of the error budget consumed by a step that shrinks sigma by `decay`.
///
/// `decay = e^{-2 c t}` for a plain step; the clamped step passes its contraction factor.
pub fn budget_spend(eps: f64, c: f64, t: f64, decay: f64, sigma: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    if c == 0.0 {
        eps * t / sigma
    } else {
        eps * (1.0 - decay) / (2.0 * c * sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_quadratic;
    use crate::flow::flow_step;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn st(mu: f64, sigma: f64) -> GaussianState {
        GaussianState::new(mu, sigma)
    }

    #[test]
    fn quadratic_has_zero_error() {
        let pts: Vec<_> = [-1.0, -0.3, 0.2, 0.9, 1.4, 2.0].iter().map(|&x| (x, 2.0 * x * x - x + 1.0)).collect();
        let q = fit_quadratic(&pts).unwrap();
        let est = estimate_errors(&pts, &q, &st(0.0, 1.0), &st(0.0, 1.0), &StepParams::default());
        assert!(est.r_hat < 1e-12 && est.beta_bar_1 < 1e-12 && est.beta_bar_2 < 1e-12);
        assert!(est.eps_hat_1 < 1e-11 && est.eps_hat_2 < 1e-11);
    }

    #[test]
    fn q_hat_values() {
        let pts: Vec<_> = [-1.0, -0.3, 0.2, 0.9, 1.4, 2.0].iter().map(|&x: &f64| (x, x.sin())).collect();
        let q = fit_quadratic(&pts).unwrap();
        let est = estimate_errors(&pts, &q, &st(0.0, 1.0), &st(0.0, 1.0), &StepParams::default());
        assert_relative_eq!(est.q_hat_1, 0.32f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(est.q_hat_2, 1.28f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(est.eps_hat_1, est.r_hat * est.q_hat_1 + est.beta_bar_1);
    }

    #[test]
    fn time_step_examples() {
        assert_relative_eq!(t_sigma(&QuadModel::new(0.0, 0.0, 1.0), 0.2), -(0.8f64.ln()) / 2.0);
        assert_relative_eq!(t_sigma(&QuadModel::new(0.0, 0.0, 1.0), 0.2), 0.111_571_775_657_104_9, max_relative = 1e-14);

        let q = QuadModel::new(0.0, 1.0, 1.0);
        let tm = t_mu(&q, &st(0.0, 1.0), 0.2);
        assert_relative_eq!(tm, -(0.6f64.ln()) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(tm, 0.255_412_811_882_995_3, max_relative = 1e-14);

        let flat = QuadModel::default();
        let ts = time_step(&flat, &st(0.0, 1.0), &ErrorEstimates::default(), &StepParams::default());
        assert!(ts.t_mu.is_infinite() && ts.t_sigma.is_infinite() && ts.t.is_infinite());

        assert!(t_eps(&QuadModel::new(0.0, 0.0, 1.0), 1.0, 0.2, 0.1).is_infinite());
        assert_relative_eq!(t_eps(&QuadModel::new(0.0, 0.0, 1.0), 1.0, 0.2, 1.0), -(0.6f64.ln()) / 2.0);
        assert_relative_eq!(t_eps(&QuadModel::default(), 2.0, 0.2, 0.5), 0.8);
    }

    #[test]
    fn t_mu_concave() {
        let q = QuadModel::new(0.0, 1.0, -1.0);
        let t = t_mu(&q, &st(0.0, 1.0), 0.2);
        assert_relative_eq!(t, 0.5 * (1.4f64).ln(), max_relative = 1e-14);
        let s = flow_step(&q, &st(0.0, 1.0), t).unwrap();
        assert_relative_eq!(s.mu.abs(), 0.2, max_relative = 1e-12);
    }

    fn bisect_displacement(q: &QuadModel, s: &GaussianState, shift: f64) -> f64 {
        let moved = |t: f64| (flow_step(q, s, t).unwrap().mu - s.mu).abs() - shift;
        let mut hi = 1e-6;
        while moved(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if moved(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn t_mu_matches_root_solve() {
        for &(b, c, mu, sigma) in &[
            (1.0, 1.0, 0.0, 1.0),
            (-2.0, 0.5, 1.0, 0.3),
            (0.3, -0.7, 2.0, 0.8),
            (1.0, 3.0, -0.1, 2.0),
            (-0.5, -2.0, -1.0, 0.1),
        ] {
            let q = QuadModel::new(0.0, b, c);
            let s = st(mu, sigma);
            let exact = t_mu(&q, &s, 0.2);
            let solved = bisect_displacement(&q, &s, 0.2 * sigma);
            if exact.is_infinite() {
                assert!(solved.is_infinite() || solved > 1e5);
            } else {
                assert_relative_eq!(exact, solved, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn cubic_sample_against_straight_line_oracle() {
        let pts: Vec<_> = [-1.0, -0.6, -0.2, 0.2, 0.6, 1.0].iter().map(|&x: &f64| (x, x.powi(3))).collect();
        let q = fit_quadratic(&pts).unwrap();
        let fit = st(0.1, 0.8);
        let cur = st(0.05, 0.6);
        let p = StepParams::default();
        let est = estimate_errors(&pts, &q, &fit, &cur, &p);

        let dens = |x: f64, s: &GaussianState| {
            (-(x - s.mu).powi(2) / (2.0 * s.sigma.powi(2))).exp() / (s.sigma * (2.0 * std::f64::consts::PI).sqrt())
        };
        let mut ls = vec![];
        let mut es = vec![];
        let mut b1s = vec![];
        let mut b2s = vec![];
        for &(x, f) in &pts {
            ls.push(dens(x, &cur) / dens(x, &fit));
            es.push(f - (q.a + q.b * x + q.c * x * x));
            b1s.push((x - cur.mu) / cur.sigma.powi(2));
            b2s.push(((x - cur.mu).powi(2) - cur.sigma.powi(2)) / cur.sigma.powi(3));
        }
        let wsum: f64 = ls.iter().sum();
        let mut r = 0.0;
        for i in 0..6 {
            r += es[i] * es[i] * ls[i];
        }
        let r = (r / wsum).sqrt();
        let stats = |bs: &Vec<f64>| {
            let mut mean = 0.0;
            let mut sq = 0.0;
            for i in 0..6 {
                mean += es[i] * bs[i] * ls[i];
                sq += (es[i] * bs[i]).powi(2) * ls[i];
            }
            let mean = (mean / wsum).abs();
            let var = (sq / wsum - mean * mean).max(0.0);
            (mean, mean + var.sqrt() / 6f64.sqrt())
        };
        let (bh1, bb1) = stats(&b1s);
        let (bh2, bb2) = stats(&b2s);
        let q1 = (2.0 * 0.04 + 6.0 * 0.04f64).sqrt() / 0.6;
        let q2 = (6.0 * 0.04 + 26.0 * 0.04f64).sqrt() / 0.6;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        assert!(close(est.r_hat, r));
        assert!(close(est.beta_hat_1, bh1) && close(est.beta_hat_2, bh2));
        assert!(close(est.beta_bar_1, bb1) && close(est.beta_bar_2, bb2));
        assert!(close(est.eps_hat_1, r * q1 + bb1));
        assert!(close(est.eps_hat_2, r * q2 + bb2));
    }

    #[test]
    fn fresh_fit_has_no_bias() {
        let pts: Vec<_> = [-1.3, -0.6, -0.1, 0.2, 0.7, 1.1, 1.9].iter().map(|&x: &f64| (x, x.powi(3) + x.abs())).collect();
        let q = fit_quadratic(&pts).unwrap();
        // Both basis functions are quadratics in x, hence orthogonal to the residual.
        let s = st(0.3, 0.9);
        let est = estimate_errors(&pts, &q, &s, &s, &StepParams::default());
        assert!(est.beta_hat_1 < 1e-12 && est.beta_hat_2 < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(StepParams::default().validate().is_ok());
        assert!(StepParams { gamma2: 0.3, ..Default::default() }.validate().is_err());
        assert!(StepParams { gamma1: 0.0, ..Default::default() }.validate().is_err());
    }

    proptest! {
        #[test]
        fn time_step_never_nan(b in -10.0..10.0f64, c in -10.0..10.0f64, mu in -5.0..5.0f64,
                               sigma in 1e-6..5.0f64, e1 in 0.0..10.0f64, e2 in 0.0..10.0f64,
                               zero_c in any::<bool>()) {
            let q = QuadModel::new(0.0, b, if zero_c { 0.0 } else { c });
            let est = ErrorEstimates { eps_hat_1: e1, eps_hat_2: e2, ..Default::default() };
            let ts = time_step(&q, &st(mu, sigma), &est, &StepParams::default());
            for t in [ts.t, ts.t_mu, ts.t_sigma, ts.t_eps1, ts.t_eps2] {
                prop_assert!(t > 0.0 && !t.is_nan());
            }
            prop_assert_eq!(ts.t, ts.t_mu.min(ts.t_sigma).min(ts.t_eps1).min(ts.t_eps2));
        }

        #[test]
        fn t_eps_monotone(c in -5.0..5.0f64, sigma in 1e-3..5.0f64, e in 1e-3..10.0f64, k in 0.01..1.0f64) {
            let q = QuadModel::new(0.0, 0.0, c);
            prop_assert!(t_eps(&q, sigma, 0.2, e * k) >= t_eps(&q, sigma, 0.2, e));
        }
    }
}
