//! Multi-seed benchmark suites over the corpus, their metrics and reports.

pub mod metrics;
pub mod report;
pub mod suite;

pub use metrics::{aggregate, compute_metrics, pi_100, runs_per_success, Metrics, RunOutcome, SuccessMode, SuccessRule, Truth};
pub use report::{emit_report, Format, Row, Table};
pub use suite::{run_noisy_suite, run_seed, run_suite, Contender, ContenderKind, SuiteConfig, SuiteResult};
