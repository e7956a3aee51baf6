//! Least-squares quadratic fit through the 3x3 normal equations.
//!
//! Abscissae are standardized before forming the moments, which keeps the
//! system well conditioned when the sample sits far from the origin.

use crate::flow::QuadModel;
use crate::{Error, Result};

/// Smallest admissible determinant of the standardized moment matrix.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Fits `q(x) = a + b x + c x^2` minimizing `sum (f_i - q(x_i))^2`.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<QuadModel> {
    if points.len() < 3 || distinct_abscissae(points) < 3 {
        return Err(Error::SingularFit);
    }
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let var = points.iter().map(|p| (p.0 - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::SingularFit);
    }

    // Moments of z = (x - mean) / sd: E[z] = 0 and E[z^2] = 1 by construction.
    // Responses are shifted by the first value so that a constant sample fits
    // with b = c = 0 exactly.
    let shift = points[0].1;
    let (mut m3, mut m4, mut r0, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, f) in points {
        let z = (x - mean) / sd;
        let z2 = z * z;
        let g = f - shift;
        m3 += z2 * z;
        m4 += z2 * z2;
        r0 += g;
        r1 += g * z;
        r2 += g * z2;
    }
    let (m3, m4, r0, r1, r2) = (m3 / n, m4 / n, r0 / n, r1 / n, r2 / n);

    // [[1, 0, 1], [0, 1, m3], [1, m3, m4]] (alpha, beta, gamma)^T = (r0, r1, r2)^T
    let det = m4 - m3 * m3 - 1.0;
    if det.is_nan() || det < SINGULAR_TOL {
        return Err(Error::SingularFit);
    }
    let gamma = (r2 - r0 - m3 * r1) / det;
    let beta = r1 - m3 * gamma;
    let alpha = shift + r0 - gamma;

    let s2 = sd * sd;
    let q = QuadModel {
        a: alpha - beta * mean / sd + gamma * mean * mean / s2,
        b: beta / sd - 2.0 * gamma * mean / s2,
        c: gamma / s2,
    };
    if !(q.a.is_finite() && q.b.is_finite() && q.c.is_finite()) {
        return Err(Error::SingularFit);
    }
    Ok(q)
}

fn distinct_abscissae(points: &[(f64, f64)]) -> usize {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.len()
}

/// Residuals `sum p(x_i) (f_i - q(x_i))` for `p in {1, x, x^2}`.
pub fn orthogonality_residuals(points: &[(f64, f64)], q: &QuadModel) -> [f64; 3] {
    points.iter().fold([0.0; 3], |mut acc, &(x, f)| {
        let e = f - q.eval(x);
        acc[0] += e;
        acc[1] += e * x;
        acc[2] += e * x * x;
        acc
    })
}
