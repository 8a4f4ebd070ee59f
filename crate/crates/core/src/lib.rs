//! Bergman determinantal point process on the unit disk.
//!
//! The process is sampled as the zero set of the hyperbolic Gaussian analytic
//! function, and the crate evaluates the weighted kernel statistic
//! `Θ_N^{(s,z)}` built from it together with the radial integrals that give
//! its expected norm.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod gaf;
pub mod hyperbolic;
pub mod kernel;
pub mod moments;
pub mod quadrature;
pub mod statistics;
pub mod sum;

pub use error::{Error, Result};
pub use gaf::{sample_configuration, sample_trial, Configuration, GafSample};
pub use hyperbolic::{DiskPoint, StatisticParams};
pub use quadrature::MomentReport;
