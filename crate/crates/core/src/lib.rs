//! Numerical laboratory for the semilinear heat equation
//! `∂_t u - Δu = f(u)` with `f(u) = ±|u|^{m-1} u e^{λ|u|^p}` and initial data
//! in the Orlicz space `exp L^p`.
//!
//! Functions live on a uniform periodic grid ([`grid`]). [`orlicz`] computes
//! Luxemburg and Lebesgue norms, [`heat`] applies the heat semigroup
//! spectrally, [`solver`] iterates the Duhamel map and marches in time,
//! [`params`] handles the exponent bookkeeping, and [`experiments`] wires
//! them into reproducible studies.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod heat;
pub mod io;
pub mod nonlinearity;
pub mod orlicz;
pub mod par;
pub mod params;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction};
pub use orlicz::{Exponent, OrliczSpec, YoungVariant};
