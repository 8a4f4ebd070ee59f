use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("exponent s = {0} is outside the open interval (1, 3/2)")]
    ExponentOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("correlation of {got} points exceeds the supported maximum of {max}")]
    TooManyPoints { got: usize, max: usize },

    #[error("root finder did not converge after {iterations} iterations ({unconverged} roots pending)")]
    RootsNotConverged { iterations: usize, unconverged: usize },

    #[error("winding number undefined: a zero lies too close to the circle |w| = {radius}")]
    ContourTooClose { radius: f64 },

    #[error("configuration valid up to |w| < {validity_radius} does not cover a disk of radius {required}")]
    Coverage { validity_radius: f64, required: f64 },

    #[error("quadrature did not reach tolerance {tol:e}: last refinement changed the value by {change:e}")]
    QuadratureNotConverged { tol: f64, change: f64 },

    #[error("need at least {needed} data points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("complex result has imaginary residue {residue:e} relative to its magnitude")]
    NotReal { residue: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
