//! Circle maps generated by pencil involutions on a closed oval.

mod involution;
mod koenigs;
mod map;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use involution::Factor;
pub use koenigs::{linearization_obstruction, mobius_diagnostics, mobius_reciprocity, MobiusDiagnostics, PARABOLIC_BAND};
pub use map::{
    convergents, fixed_points, involution_identity_defect, periodicity_defect, rotation_number, CircleMap, Lift,
    RotationEstimate,
};

pub(crate) use map::grid_params;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map reverses orientation; a lift needs an even number of factors")]
    OrientationReversing,
    #[error("maps act on different ovals")]
    OvalMismatch,
    #[error("lift has degree {0}, expected 1")]
    NotDegreeOne(f64),
    #[error("expected 2 fixed points, found {0}")]
    FixedPointCount(usize),
    #[error("multiplier {0} is too close to 1")]
    Parabolic(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}
