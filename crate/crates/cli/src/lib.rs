//! Reporting front end for the `enso-core` solvers: CSV tables, error
//! curves, order/iteration sweeps and trajectories, plus the four bundled
//! comparison tables used as sweep targets.

mod error;
pub mod report;
pub mod spec;
pub mod tables;

pub use error::CliError;
