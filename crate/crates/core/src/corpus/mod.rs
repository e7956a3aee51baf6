//! The benchmark corpus: fifty one-dimensional test functions with attribute
//! tags and their global minima.
//!
//! Minima are produced by [`ground_truth`] and stored in
//! `fixtures/corpus_minima.tsv`; regenerate with
//! `cargo run --release -p gaussflow --example generate_corpus_minima`.

mod functions;
pub mod ground_truth;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

pub use functions::{Definition, DEFINITIONS};
pub use ground_truth::{ground_truth, GroundTruth, GROUND_TRUTH_GRID};

use crate::objective::{Domain, Normalization, Objective, NORMALIZATION_GRID};

const MINIMA_FIXTURE: &str = include_str!("../../fixtures/corpus_minima.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attribute {
    Bimodal,
    BoundaryMin,
    Concave,
    Convex,
    Discontinuous,
    HighPower,
    InteriorMin,
    Linear,
    Multimodal,
    MultipleGlobalMin,
    NonConvex,
    NonSmooth,
    Oscillatory,
    Quadratic,
    Smooth,
    StrictlyConvex,
    UniformlyConvex,
    Unimodal,
}

impl Attribute {
    pub const ALL: [Attribute; 18] = [
        Self::Bimodal,
        Self::BoundaryMin,
        Self::Concave,
        Self::Convex,
        Self::Discontinuous,
        Self::HighPower,
        Self::InteriorMin,
        Self::Linear,
        Self::Multimodal,
        Self::MultipleGlobalMin,
        Self::NonConvex,
        Self::NonSmooth,
        Self::Oscillatory,
        Self::Quadratic,
        Self::Smooth,
        Self::StrictlyConvex,
        Self::UniformlyConvex,
        Self::Unimodal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bimodal => "bimodal",
            Self::BoundaryMin => "boundary-min",
            Self::Concave => "concave",
            Self::Convex => "convex",
            Self::Discontinuous => "discontinuous",
            Self::HighPower => "high-power",
            Self::InteriorMin => "interior-min",
            Self::Linear => "linear",
            Self::Multimodal => "multimodal",
            Self::MultipleGlobalMin => "multiple-global-min",
            Self::NonConvex => "non-convex",
            Self::NonSmooth => "non-smooth",
            Self::Oscillatory => "oscillatory",
            Self::Quadratic => "quadratic",
            Self::Smooth => "smooth",
            Self::StrictlyConvex => "strictly-convex",
            Self::UniformlyConvex => "uniformly-convex",
            Self::Unimodal => "unimodal",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Attribute {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == key)
            .ok_or_else(|| format!("unknown attribute {s:?}"))
    }
}

/// One connected piece of an argmin set.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimizer {
    Point(f64),
    Interval(f64, f64),
}

impl Minimizer {
    pub fn distance(&self, x: f64) -> f64 {
        match *self {
            Self::Point(p) => (x - p).abs(),
            Self::Interval(lo, hi) => (lo - x).max(x - hi).max(0.0),
        }
    }

    fn to_field(self) -> String {
        match self {
            Self::Point(x) => format!("{x:?}"),
            Self::Interval(lo, hi) => format!("{lo:?}:{hi:?}"),
        }
    }

    fn from_field(s: &str) -> Option<Self> {
        match s.split_once(':') {
            Some((lo, hi)) => Some(Self::Interval(lo.parse().ok()?, hi.parse().ok()?)),
            None => Some(Self::Point(s.parse().ok()?)),
        }
    }
}

/// A corpus entry with its tags and global minima on the original scale.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TestFunction {
    pub name: &'static str,
    pub expression: &'static str,
    pub domain: Domain,
    pub attributes: BTreeSet<Attribute>,
    pub known_min_f: f64,
    pub known_min_x: Vec<Minimizer>,
    #[serde(skip)]
    f: fn(f64) -> f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn function(&self) -> fn(f64) -> f64 {
        self.f
    }

    pub fn has(&self, attr: Attribute) -> bool {
        self.attributes.contains(&attr)
    }

    pub fn has_all(&self, attrs: &[Attribute]) -> bool {
        attrs.iter().all(|a| self.has(*a))
    }

    /// Distance from `x` to the nearest global minimizer.
    pub fn min_distance(&self, x: f64) -> f64 {
        self.known_min_x.iter().map(|m| m.distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Unscaled objective on the function's domain.
    pub fn objective(&self) -> Objective {
        Objective::from_arc(Arc::new(self.f), self.domain)
    }

    /// Objective rescaled to unit oscillation on the domain.
    pub fn normalized_objective(&self) -> (Objective, Normalization) {
        let mut obj = self.objective();
        let norm = obj.normalize(NORMALIZATION_GRID).expect("corpus functions are finite on their domains");
        (obj, norm)
    }
}

/// Complementary tags derived from the explicit ones.
fn derive_tags(explicit: &[Attribute]) -> BTreeSet<Attribute> {
    let mut tags: BTreeSet<Attribute> = explicit.iter().copied().collect();
    if !tags.contains(&Attribute::Convex) {
        tags.insert(Attribute::NonConvex);
    }
    if !tags.contains(&Attribute::NonSmooth) {
        tags.insert(Attribute::Smooth);
    }
    if !tags.contains(&Attribute::Multimodal) {
        tags.insert(Attribute::Unimodal);
    }
    tags
}

/// Parses the minima fixture into `(name, f_min, minimizers)` rows.
pub fn parse_minima(text: &str) -> Result<Vec<(String, f64, Vec<Minimizer>)>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || format!("minima fixture line {}: {line:?}", i + 1);
        let mut cols = line.split('\t');
        let (Some(name), Some(f_min), Some(xs)) = (cols.next(), cols.next(), cols.next()) else {
            return Err(bad());
        };
        let f_min: f64 = f_min.parse().map_err(|_| bad())?;
        let xs = xs
            .split(';')
            .map(|s| Minimizer::from_field(s).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((name.to_string(), f_min, xs));
    }
    Ok(rows)
}

/// Formats one fixture row.
pub fn format_minima_row(name: &str, gt: &GroundTruth) -> String {
    let xs: Vec<String> = gt.minimizers.iter().map(|m| m.to_field()).collect();
    format!("{name}\t{:?}\t{}", gt.f_min, xs.join(";"))
}

/// The full corpus in definition order.
pub fn load_corpus() -> &'static [TestFunction] {
    static CORPUS: OnceLock<Vec<TestFunction>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let rows = parse_minima(MINIMA_FIXTURE).expect("valid minima fixture");
        DEFINITIONS
            .iter()
            .map(|d| {
                let (_, f_min, xs) = rows
                    .iter()
                    .find(|r| r.0 == d.name)
                    .unwrap_or_else(|| panic!("no stored minimum for {}", d.name));
                TestFunction {
                    name: d.name,
                    expression: d.expression,
                    domain: Domain::new(d.x_min, d.x_max).expect("valid corpus domain"),
                    attributes: derive_tags(d.tags),
                    known_min_f: *f_min,
                    known_min_x: xs.clone(),
                    f: d.f,
                }
            })
            .collect()
    })
}

pub fn find(name: &str) -> Option<&'static TestFunction> {
    load_corpus().iter().find(|f| f.name.eq_ignore_ascii_case(name))
}

pub fn with_attribute(attr: Attribute) -> Vec<&'static TestFunction> {
    load_corpus().iter().filter(|f| f.has(attr)).collect()
}

/// A named attribute conjunction selecting part of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionClass {
    pub name: &'static str,
    pub attributes: &'static [Attribute],
}

impl FunctionClass {
    pub fn members(&self) -> Vec<&'static TestFunction> {
        load_corpus().iter().filter(|f| f.has_all(self.attributes)).collect()
    }
}

use Attribute as A;

/// Function classes of the per-class result tables.
pub const CLASSES: &[FunctionClass] = &[
    FunctionClass {
        name: "uniformly-convex",
        attributes: &[A::UniformlyConvex, A::InteriorMin, A::Unimodal, A::Smooth],
    },
    FunctionClass { name: "high-power", attributes: &[A::HighPower] },
    FunctionClass { name: "non-smooth-convex", attributes: &[A::NonSmooth, A::Convex] },
    FunctionClass { name: "boundary-convex", attributes: &[A::BoundaryMin, A::Convex] },
    FunctionClass {
        name: "smooth-unimodal",
        attributes: &[A::Unimodal, A::NonConvex, A::InteriorMin, A::Smooth],
    },
    FunctionClass {
        name: "non-smooth-unimodal",
        attributes: &[A::Unimodal, A::NonConvex, A::InteriorMin, A::NonSmooth],
    },
    FunctionClass {
        name: "smooth-multimodal",
        attributes: &[A::Multimodal, A::InteriorMin, A::NonConvex, A::Smooth],
    },
    FunctionClass {
        name: "non-smooth-multimodal",
        attributes: &[A::Multimodal, A::InteriorMin, A::NonConvex, A::NonSmooth],
    },
    FunctionClass { name: "non-convex-boundary", attributes: &[A::NonConvex, A::BoundaryMin] },
    FunctionClass { name: "discontinuous", attributes: &[A::Discontinuous] },
    FunctionClass { name: "all", attributes: &[] },
];

pub fn class(name: &str) -> Option<FunctionClass> {
    CLASSES.iter().copied().find(|c| c.name.eq_ignore_ascii_case(name))
}
