//! Numerical strictly convex curves with analytic jets, projective
//! primitives, and the tangent, chord and diameter constructions built on
//! them.

mod constructions;
mod oval;
mod primitives;
pub mod roots;
mod spec;

pub use constructions::{
    affine_curvature, affine_diameter, chord_of_contact, circle_distance, conjugate_direction,
    intersect_line_oval, normalize_param, support_params, tangents_from_point, visible_arc, wrap_pi,
    Chord, ROOT_SAMPLES, TANGENCY_BAND,
};
pub use oval::{Domain, Oval, MAX_JET_ORDER};
pub use primitives::{line_join, line_meet, Meet, PlanePoint, ProjLine, Vec2};
pub use spec::OvalSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),
    #[error("parameter {t} outside [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("point is not exterior: {0}")]
    NotExterior(String),
    #[error("operation needs a closed oval")]
    NotClosed,
    #[error("curve is not centrally symmetric (defect {0:e})")]
    NotCentrallySymmetric(f64),
    #[error("root not found: {0}")]
    NoRoot(String),
}
