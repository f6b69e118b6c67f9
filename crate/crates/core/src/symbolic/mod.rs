//! Exact reconstruction of the `eps`-expansion of the four-point
//! construction on a curve with affine curvature `k = +-1` at the base point,
//! and of the involution defect of the induced map on chord parameters.

pub mod closed_forms;
mod condition;
mod jet;
pub mod report;
mod solver;

pub use condition::condition_series;
pub use jet::{curve_series, gamma_jet, gamma_jet_to, tangent_series, JetData, KSign};
pub use report::{verify_series, SeriesReport};
pub use solver::{
    involution_defect, jet_for_order, solve_duality_expansion, solve_to_order, solve_with_jet,
    DualityExpansion, InvolutionDefect, SolveError, DEFAULT_CONDITION_ORDER,
};
