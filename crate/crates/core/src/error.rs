use thiserror::Error;

use crate::params::Constraint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grid function carries a NaN or infinite sample.
    #[error("non-finite value {value} at grid index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The hypothesis of an inequality does not hold, so its margin is meaningless.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("ratio undefined for the zero function")]
    ZeroFunction,

    #[error("nonlinearity overflow at grid index {index} (|u| = {value})")]
    Overflow { index: usize, value: f64 },

    #[error("Picard iteration is not contracting: ratio {ratio:.6e} at iteration {iteration}")]
    Divergence { ratio: f64, iteration: usize },

    #[error("finite-time growth: sup|u| = {sup:.6e} exceeds cap {cap} at t = {time:.6e}")]
    FiniteTimeGrowth { time: f64, sup: f64, cap: f64 },

    #[error("empty window ({lo}, {hi})")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("no admissible exponent a: {0}")]
    NoAdmissibleExponent(String),

    /// No lattice point satisfies the full constraint system.
    #[error("no feasible r on the lattice; tightest violated constraint {constraint:?} (violation {violation:.6e} at r = {r})")]
    Infeasible {
        constraint: Constraint,
        violation: f64,
        r: f64,
    },

    /// A configuration value is invalid; `key` is the offending field.
    #[error("invalid config at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
