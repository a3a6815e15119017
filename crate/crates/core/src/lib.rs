//! Semi-analytic series solvers for two nonlinear ENSO oscillator models.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! * [`series`]: dense truncated power series with the transform algebra
//!   (sums, scaling, Cauchy products, cubes, term-wise integration and
//!   differentiation).
//! * [`models`]: parameter sets for the coupled recharge oscillator and the
//!   delayed oscillator.
//! * [`dtm`]: the differential transform recurrences.
//! * [`adm`]: Adomian decomposition with Adomian polynomials of `u³`.
//! * [`vim`]: variational iteration with multiplier `-1`.
//! * [`oracle`]: the closed-form Bernoulli solution of the delayed model,
//!   a classical RK4 integrator and a series residual check.
#![no_std]

extern crate alloc;

pub mod adm;
pub mod dtm;
mod error;
pub mod models;
pub mod oracle;
pub mod series;
pub mod vim;

pub use error::{Error, Result};
pub use models::{CoupledParams, DelayedParams, Model, ReducedCoeffs, Solution, SolutionPair};
pub use series::SeriesPoly;
