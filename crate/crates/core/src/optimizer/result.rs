use std::fmt;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ConvergedInterior,
    ConvergedBoundary,
    SigmaFloor,
    MaxIters,
    MaxEvals,
}

impl StopReason {
    /// Whether the run ended on a fail-safe rather than a convergence test.
    pub fn is_failsafe(self) -> bool {
        matches!(self, Self::SigmaFloor | Self::MaxIters | Self::MaxEvals)
    }

    /// Whether the evaluation or iteration budget ran out.
    pub fn is_budget(self) -> bool {
        matches!(self, Self::MaxIters | Self::MaxEvals)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ConvergedInterior => "converged_interior",
            Self::ConvergedBoundary => "converged_boundary",
            Self::SigmaFloor => "sigma_floor",
            Self::MaxIters => "max_iters",
            Self::MaxEvals => "max_evals",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State at the start of one iteration and the step taken from it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub mu: f64,
    pub sigma: f64,
    /// Step length before clamping; infinite for flat surrogates.
    pub t: f64,
    /// Size of the sample the current surrogate was fitted on.
    pub n: usize,
    /// Cumulative evaluations when the iteration started.
    pub evals: u64,
    /// Whether this iteration drew a new sample and refitted.
    pub refit: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RunResult {
    pub x_out: f64,
    pub f_out: f64,
    pub n_evals: u64,
    pub n_iters: u64,
    pub stop_reason: StopReason,
    pub restarts: usize,
    /// Final mean and standard deviation of the last inner loop.
    pub mu_final: f64,
    pub sigma_final: f64,
    pub trace: Option<Vec<TraceRecord>>,
}

/// Objective or numerical failure, with whatever trace was recorded.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct RunError {
    #[source]
    pub error: Error,
    pub n_evals: u64,
    pub trace: Vec<TraceRecord>,
}
