//! Derivative-free global minimization of one-dimensional functions.
//!
//! The optimizer replaces `f` by its Gaussian relaxation
//! `F(mu, sigma) = E[f(X)]`, `X ~ N(mu, sigma^2)`, and follows the gradient flow
//! of `F` using a quadratic least-squares surrogate fitted to Monte Carlo
//! samples. Past evaluations are reused through rejection sampling and the time
//! step is chosen from importance-sampled error estimates.
//!
//! ```
//! use gaussflow::{minimize, Domain, Objective, RunConfig};
//!
//! let mut obj = Objective::new(|x: f64| (x - 1.0).powi(2), Domain::new(-4.0, 4.0).unwrap());
//! let result = minimize(&mut obj, &RunConfig::default(), 7).unwrap();
//! assert!((result.x_out - 1.0).abs() < 1e-2);
//! ```

pub mod baselines;
pub mod bench;
pub mod corpus;
pub mod fit;
pub mod flow;
pub mod objective;
pub mod optimizer;
pub mod sampling;
pub mod step;

mod error;

pub use error::{Error, Result};
pub use fit::fit_quadratic;
pub use flow::{GaussianState, QuadModel};
pub use objective::{Domain, Objective};
pub use optimizer::{minimize, RunConfig, RunResult, StopReason};
pub use sampling::{SampleQuad, SampleStore};
