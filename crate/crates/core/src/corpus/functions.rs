//! Closed-form definitions of the benchmark functions.

use std::f64::consts::PI;

use super::Attribute::{self, *};

/// A benchmark function before its minima are attached.
#[derive(Debug, Clone, Copy)]
pub struct Definition {
    pub name: &'static str,
    pub expression: &'static str,
    pub x_min: f64,
    pub x_max: f64,
    pub f: fn(f64) -> f64,
    /// Tags other than the complementary pairs, which are derived.
    pub tags: &'static [Attribute],
}

fn floor_quantum(x: f64) -> f64 {
    let (a, b) = ((2.0 * x).sin(), (5.0 * x).sin());
    (5.0 * (a * a + b * b)).floor()
}

/// `x^2 sin^2(1/x)`, extended by continuity at zero.
fn infinite_global_min(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let s = (1.0 / x).sin();
        x * x * s * s
    }
}

/// `x^2 + sin^2(1/x)`, set to zero at the origin.
fn infinite_local_min(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let s = (1.0 / x).sin();
        x * x + s * s
    }
}

fn multi_cusp(x: f64) -> f64 {
    let mut prod = x.abs();
    for j in 1..=5 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        prod *= (x - sign * j as f64 / 10.0).abs().sqrt();
    }
    prod
}

pub const DEFINITIONS: &[Definition] = &[
    Definition {
        name: "DeJong1",
        expression: "x^2",
        x_min: -5.12,
        x_max: 5.12,
        f: |x| x * x,
        tags: &[Convex, StrictlyConvex, UniformlyConvex, Quadratic, InteriorMin],
    },
    Definition {
        name: "P104",
        expression: "(-5 + 24x - 16x^2) e^{-x}",
        x_min: 1.9,
        x_max: 3.9,
        f: |x| (-5.0 + 24.0 * x - 16.0 * x * x) * (-x).exp(),
        tags: &[Convex, StrictlyConvex, UniformlyConvex, InteriorMin],
    },
    Definition {
        name: "P113",
        expression: "-x^{2/3} - (1 - x^2)^{1/3}",
        x_min: 0.001,
        x_max: 0.99,
        f: |x| -x.powf(2.0 / 3.0) - (1.0 - x * x).cbrt(),
        tags: &[Convex, StrictlyConvex, UniformlyConvex, InteriorMin],
    },
    Definition {
        name: "Zakharov",
        expression: "1.25x^2 + 0.0625x^4",
        x_min: -5.0,
        x_max: 10.0,
        f: |x| 1.25 * x * x + 0.0625 * x.powi(4),
        tags: &[Convex, StrictlyConvex, UniformlyConvex, InteriorMin],
    },
    Definition {
        name: "Highpower",
        expression: "x^8",
        x_min: -2.0,
        x_max: 2.0,
        f: |x| x.powi(8),
        tags: &[Convex, StrictlyConvex, HighPower, InteriorMin],
    },
    Definition {
        name: "Singular",
        expression: "1/(1 - x) + 1/x",
        x_min: 0.01,
        x_max: 0.99,
        f: |x| 1.0 / (1.0 - x) + 1.0 / x,
        tags: &[Convex, StrictlyConvex, UniformlyConvex, NonSmooth, Discontinuous, InteriorMin],
    },
    Definition {
        name: "V",
        expression: "|0.5 - x|",
        x_min: -2.0,
        x_max: 2.0,
        f: |x| (0.5 - x).abs(),
        tags: &[Convex, NonSmooth, InteriorMin],
    },
    Definition {
        name: "Identity",
        expression: "x",
        x_min: -3.0,
        x_max: 3.0,
        f: |x| x,
        tags: &[Convex, Concave, Linear, BoundaryMin],
    },
    Definition {
        name: "Zero",
        expression: "0",
        x_min: -3.0,
        x_max: 3.0,
        f: |_| 0.0,
        tags: &[Convex, Concave, Linear, BoundaryMin, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "Flatnonconvex",
        expression: "1 - cos(x^5)",
        x_min: -PI,
        x_max: PI,
        f: |x| 1.0 - x.powi(5).cos(),
        tags: &[InteriorMin, Oscillatory],
    },
    Definition {
        name: "Michalewicz",
        expression: "-sin(x) sin^20(x^2/pi)",
        x_min: 0.0,
        x_max: PI,
        f: |x| -x.sin() * (x * x / PI).sin().powi(20),
        tags: &[InteriorMin],
    },
    Definition {
        name: "P118",
        expression: "(x - 2)^2 if x < 3, else 2 log(x - 2) + 1",
        x_min: 0.0,
        x_max: 6.0,
        f: |x| if x < 3.0 { (x - 2.0).powi(2) } else { 2.0 * (x - 2.0).ln() + 1.0 },
        tags: &[InteriorMin],
    },
    Definition {
        name: "Cusp",
        expression: "sqrt(|x|)",
        x_min: -3.0,
        x_max: 2.0,
        f: |x| x.abs().sqrt(),
        tags: &[NonSmooth, InteriorMin],
    },
    Definition {
        name: "VStep",
        expression: "|x - 5|/2 if |x - 5| < 1, else 1",
        x_min: 0.0,
        x_max: 10.0,
        f: |x| if (x - 5.0).abs() < 1.0 { 0.5 * (x - 5.0).abs() } else { 1.0 },
        tags: &[NonSmooth, Discontinuous, InteriorMin],
    },
    Definition {
        name: "Delta10",
        expression: "-sum_{k=1}^{10} cos(2 pi k x)",
        x_min: -0.5,
        x_max: 0.5,
        f: |x| -(1..=10).map(|k| (2.0 * PI * k as f64 * x).cos()).sum::<f64>(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Deltadprime10",
        expression: "-sum_{k=1}^{10} 4 pi^2 k^2 cos(2 pi k x)",
        x_min: -0.5,
        x_max: 0.5,
        f: |x| {
            -(1..=10)
                .map(|k| {
                    let k = k as f64;
                    4.0 * PI * PI * k * k * (2.0 * PI * k * x).cos()
                })
                .sum::<f64>()
        },
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Deltaprime10",
        expression: "sum_{k=1}^{10} 2 pi k sin(2 pi k x)",
        x_min: -0.5,
        x_max: 0.5,
        f: |x| {
            (1..=10)
                .map(|k| {
                    let k = k as f64;
                    2.0 * PI * k * (2.0 * PI * k * x).sin()
                })
                .sum::<f64>()
        },
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Doublewell",
        expression: "-x^2 + x^4",
        x_min: -2.0,
        x_max: 2.0,
        f: |x| -x * x + x.powi(4),
        tags: &[Multimodal, Bimodal, InteriorMin],
    },
    Definition {
        name: "Forrester",
        expression: "-(2 - 6x)^2 sin(4 - 12x)",
        x_min: 0.0,
        x_max: 1.0,
        f: |x| -(2.0 - 6.0 * x).powi(2) * (4.0 - 12.0 * x).sin(),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "Griewangk",
        expression: "1 + x^2/4000 - cos(x)",
        x_min: -600.0,
        x_max: 600.0,
        f: |x| 1.0 + x * x / 4000.0 - x.cos(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Infiniteglobalmin",
        expression: "x^2 sin^2(1/x)",
        x_min: -3.0,
        x_max: 2.0,
        f: infinite_global_min,
        tags: &[Multimodal, InteriorMin, Oscillatory, MultipleGlobalMin],
    },
    Definition {
        name: "P102",
        expression: "sin(x) + sin(3.33333x)",
        x_min: -2.7,
        x_max: 7.5,
        f: |x| x.sin() + (3.33333 * x).sin(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P103",
        expression: "sum_{j=1}^{6} j sin(j + (j + 1)x)",
        x_min: -2.7,
        x_max: 7.5,
        f: |x| {
            (1..=6)
                .map(|j| {
                    let j = j as f64;
                    j * (j + (j + 1.0) * x).sin()
                })
                .sum::<f64>()
        },
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P105",
        expression: "(-1.4 + 3x) sin(18x)",
        x_min: 0.0,
        x_max: 1.2,
        f: |x| (-1.4 + 3.0 * x) * (18.0 * x).sin(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P106",
        expression: "e^{-x^2} (-x - sin(x))",
        x_min: -10.0,
        x_max: 10.0,
        f: |x| (-x * x).exp() * (-x - x.sin()),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P107",
        expression: "3 - 0.84x + log(x) + sin(x) + sin(10x/3)",
        x_min: 2.7,
        x_max: 7.5,
        f: |x| 3.0 - 0.84 * x + x.ln() + x.sin() + (10.0 * x / 3.0).sin(),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P108",
        expression: "-sum_{k=1}^{6} k cos((k + 1)x + k)",
        x_min: -10.0,
        x_max: 10.0,
        f: |x| {
            -(1..=6)
                .map(|k| {
                    let k = k as f64;
                    k * ((k + 1.0) * x + k).cos()
                })
                .sum::<f64>()
        },
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P109",
        expression: "sin(2x/3) + sin(x)",
        x_min: 3.1,
        x_max: 20.4,
        f: |x| (2.0 * x / 3.0).sin() + x.sin(),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P110",
        expression: "-x sin(x)",
        x_min: 0.0,
        x_max: 10.0,
        f: |x| -x * x.sin(),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P111",
        expression: "2 cos(x) + cos(2x)",
        x_min: -PI / 2.0,
        x_max: 2.0 * PI,
        f: |x| 2.0 * x.cos() + (2.0 * x).cos(),
        tags: &[Multimodal, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "P112",
        expression: "cos^3(x) + sin^3(x)",
        x_min: 0.0,
        x_max: 2.0 * PI,
        f: |x| x.cos().powi(3) + x.sin().powi(3),
        tags: &[Multimodal, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "P114",
        expression: "-e^{-x} sin(2 pi x)",
        x_min: 0.0,
        x_max: 4.0,
        f: |x| -(-x).exp() * (2.0 * PI * x).sin(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P115",
        expression: "(6 - 5x + x^2)/(1 + x^2)",
        x_min: -5.0,
        x_max: 5.0,
        f: |x| (6.0 - 5.0 * x + x * x) / (1.0 + x * x),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P120",
        expression: "e^{-x^2} (-x + sin(x))",
        x_min: -10.0,
        x_max: 10.0,
        f: |x| (-x * x).exp() * (-x + x.sin()),
        tags: &[Multimodal, InteriorMin],
    },
    Definition {
        name: "P121",
        expression: "x cos(2x) + x sin(x)",
        x_min: 0.0,
        x_max: 10.0,
        f: |x| x * (2.0 * x).cos() + x * x.sin(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "P122",
        expression: "e^{-3x} - sin^3(x)",
        x_min: 0.0,
        x_max: 20.0,
        f: |x| (-3.0 * x).exp() - x.sin().powi(3),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Schwefel",
        expression: "-x sin(sqrt(|x|))",
        x_min: -500.0,
        x_max: 500.0,
        f: |x| -x * x.abs().sqrt().sin(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "T1",
        expression: "x^2 - cos(10x)",
        x_min: -3.0,
        x_max: 3.0,
        f: |x| x * x - (10.0 * x).cos(),
        tags: &[Multimodal, InteriorMin, Oscillatory],
    },
    Definition {
        name: "Unbalanceddoublewell",
        expression: "x/4 - x^2 + x^4",
        x_min: -1.5,
        x_max: 1.5,
        f: |x| x / 4.0 - x * x + x.powi(4),
        tags: &[Multimodal, Bimodal, InteriorMin],
    },
    Definition {
        name: "Infinitelocalmin",
        expression: "x^2 + sin^2(1/x)",
        x_min: -2.0,
        x_max: 3.0,
        f: infinite_local_min,
        tags: &[Multimodal, NonSmooth, InteriorMin, Oscillatory],
    },
    Definition {
        name: "MultiCusp",
        expression: "|x| prod_{j=1}^{5} |x - (-1)^j j/10|^{1/2}",
        x_min: -1.0,
        x_max: 1.0,
        f: multi_cusp,
        tags: &[Multimodal, NonSmooth, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "Quantum",
        expression: "floor(5 (sin^2(2x) + sin^2(5x)))",
        x_min: 0.0,
        x_max: PI,
        f: floor_quantum,
        tags: &[Multimodal, NonSmooth, Discontinuous, InteriorMin, BoundaryMin, MultipleGlobalMin],
    },
    Definition {
        name: "QuantumconcaveA",
        expression: "x + floor(-5x^2)/5",
        x_min: 0.0,
        x_max: 2.0,
        f: |x| x + (-5.0 * x * x).floor() / 5.0,
        tags: &[Multimodal, NonSmooth, Discontinuous, InteriorMin],
    },
    Definition {
        name: "Quantumconvex",
        expression: "floor(5x^2)",
        x_min: -1.0,
        x_max: 2.0,
        f: |x| (5.0 * x * x).floor(),
        tags: &[Multimodal, NonSmooth, Discontinuous, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "Step",
        expression: "0 if |x - 5| < 1, else 1",
        x_min: 0.0,
        x_max: 10.0,
        f: |x| if (x - 5.0).abs() < 1.0 { 0.0 } else { 1.0 },
        tags: &[Multimodal, NonSmooth, Discontinuous, InteriorMin, MultipleGlobalMin],
    },
    Definition {
        name: "Asymetricconcavequartic",
        expression: "x - x^2 - 0.01x^4",
        x_min: -3.0,
        x_max: 3.0,
        f: |x| x - x * x - 0.01 * x.powi(4),
        tags: &[Concave, Multimodal, Bimodal, BoundaryMin],
    },
    Definition {
        name: "Concaveparabola",
        expression: "-x - x^2",
        x_min: -3.0,
        x_max: 3.0,
        f: |x| -x - x * x,
        tags: &[Concave, Bimodal, BoundaryMin],
    },
    Definition {
        name: "Concavequartic",
        expression: "-x^2 - 0.01x^4",
        x_min: -3.0,
        x_max: 3.0,
        f: |x| -x * x - 0.01 * x.powi(4),
        tags: &[Concave, Multimodal, Bimodal, BoundaryMin, MultipleGlobalMin],
    },
    Definition {
        name: "QuantumconcaveB",
        expression: "-x + floor(-5x^2)/5",
        x_min: 0.0,
        x_max: 2.0,
        f: |x| -x + (-5.0 * x * x).floor() / 5.0,
        tags: &[Multimodal, NonSmooth, Discontinuous, BoundaryMin],
    },
    Definition {
        name: "Wedge",
        expression: "-|1 + x|",
        x_min: -2.0,
        x_max: 2.0,
        f: |x| -(1.0 + x).abs(),
        tags: &[Concave, NonSmooth, Bimodal, BoundaryMin],
    },
];
