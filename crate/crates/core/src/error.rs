use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::Species;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("derivative order {order} exceeds n_max = {max}")]
    MaxOrderExceeded { order: u32, max: u32 },

    #[error("no value supplied for {species}{order}")]
    MissingDerivative { species: Species, order: u32 },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid boundary conditions: {0}")]
    InvalidBoundary(String),

    #[error("step size underflow at x = {x} for lambda = {lambda}")]
    StepFailure { lambda: Complex64, x: f64 },

    #[error("extrapolation did not converge (estimate {estimate}, error {err_est:e})")]
    NoConvergence { estimate: Complex64, err_est: f64 },

    #[error("zero of the determinant within guard distance of the contour near {near}")]
    BoundaryZero { near: Complex64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
