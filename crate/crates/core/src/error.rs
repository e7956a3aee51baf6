use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("objective returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid domain [{x_min}, {x_max}]")]
    InvalidDomain { x_min: f64, x_max: f64 },
    #[error("least-squares system is singular")]
    SingularFit,
    #[error("flow step overflows (exponent {exponent})")]
    FlowOverflow { exponent: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed sample store line {line}: {reason}")]
    Store { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
