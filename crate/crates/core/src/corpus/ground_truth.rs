//! Dense-grid search with local golden-section refinement.

use crate::objective::Domain;

use super::Minimizer;

/// Grid size used to generate the stored minima.
pub const GROUND_TRUTH_GRID: usize = 200_001;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub f_min: f64,
    pub minimizers: Vec<Minimizer>,
}

impl GroundTruth {
    /// One point of the argmin set; the lower end for intervals.
    pub fn representative(&self) -> f64 {
        match self.minimizers[0] {
            Minimizer::Point(x) => x,
            Minimizer::Interval(lo, _) => lo,
        }
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Global minimum of `f` on `domain` and every (numerically) global minimizer.
///
/// Runs of at least three grid points at the minimum value are reported as
/// intervals; isolated near-minimal grid points are refined on their two
/// neighboring cells.
pub fn ground_truth(f: &dyn Fn(f64) -> f64, domain: &Domain, grid_points: usize) -> GroundTruth {
    let xs: Vec<f64> = domain.grid(grid_points).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let n = xs.len();
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let osc = if hi > lo { hi - lo } else { 1.0 };
    let flat_tol = 1e-12 * osc;
    let detect_tol = 1e-6 * osc;
    let keep_tol = 1e-9 * osc;

    let mut candidates: Vec<(Minimizer, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        if ys[i] <= lo + flat_tol {
            let start = i;
            while i + 1 < n && ys[i + 1] <= lo + flat_tol {
                i += 1;
            }
            if i - start >= 2 {
                candidates.push((Minimizer::Interval(xs[start], xs[i]), ys[start..=i].iter().copied().fold(f64::INFINITY, f64::min)));
                i += 1;
                continue;
            }
            i = start;
        }
        let left = if i == 0 { f64::INFINITY } else { ys[i - 1] };
        let right = if i + 1 == n { f64::INFINITY } else { ys[i + 1] };
        if ys[i] <= lo + detect_tol && ys[i] <= left && ys[i] <= right {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(n - 1)];
            let (x, v) = golden_section(f, a, b);
            let refined = if v < ys[i] { (x, v) } else { (xs[i], ys[i]) };
            candidates.push((Minimizer::Point(refined.0), refined.1));
        }
        i += 1;
    }

    let f_min = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let h = domain.width() / (n - 1) as f64;
    let mut minimizers: Vec<Minimizer> = Vec::new();
    for (m, v) in candidates {
        if v > f_min + keep_tol {
            continue;
        }
        let duplicate = match (minimizers.last(), m) {
            (Some(Minimizer::Point(p)), Minimizer::Point(x)) => (x - p).abs() < 2.0 * h,
            _ => false,
        };
        if !duplicate {
            minimizers.push(m);
        }
    }
    GroundTruth { f_min, minimizers }
}
