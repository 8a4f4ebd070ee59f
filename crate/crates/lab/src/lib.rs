//! Experiments on the Bergman point process: Monte Carlo runs checked
//! against quadrature, consistency checks, and their CSV / JSON reports.

pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::RunConfig;
pub use error::{LabError, LabResult};
pub use report::{emit, Format};
