//! Numeric experiments linking the series expansion to curves, and the
//! circle maps to measurable defects.

mod incidence;
mod parallelogram;
mod scaling;
mod scan;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::geometry::GeometryError;

pub use incidence::{incidence_defect, IncidenceRecord};
pub use parallelogram::{check_central_symmetry, parallelogram_test, DefectReport, SYMMETRY_TOL};
pub use scaling::{epsilon_scaling_fit, extrapolate_to_zero, predicted_defect, ScalingFit};
pub use scan::{conjugacy_scan, PairFamily, ScanRow, ScanSettings, SCAN_COLUMNS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(DynamicsError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl From<DynamicsError> for ExperimentError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Geometry(g) => ExperimentError::Geometry(g),
            other => ExperimentError::Dynamics(other),
        }
    }
}
