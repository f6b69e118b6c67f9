use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    fixed_points, linearization_obstruction, mobius_reciprocity, periodicity_defect, rotation_number, CircleMap,
    DynamicsError, Factor,
};
use crate::geometry::{Oval, Vec2};

use super::ExperimentError;

/// Pairs of pencils swept by [`conjugacy_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PairFamily {
    /// Directions at angles `pi i / n`, all ordered pairs.
    DirectionPairs { n: usize },
    /// Points `origin + s_i direction` with `s_i` equispaced on
    /// `[s_min, s_max]`, all ordered pairs of distinct points.
    PointPairs { origin: Vec2, direction: Vec2, n: usize, s_min: f64, s_max: f64 },
}

impl PairFamily {
    fn factors(&self) -> Vec<Factor> {
        match *self {
            PairFamily::DirectionPairs { n } => (0..n).map(|i| Factor::direction_angle(PI * i as f64 / n as f64)).collect(),
            PairFamily::PointPairs { origin, direction, n, s_min, s_max } => (0..n)
                .map(|i| {
                    let s = if n == 1 { s_min } else { s_min + (s_max - s_min) * i as f64 / (n - 1) as f64 };
                    Factor::Pencil { p: origin + direction * s }
                })
                .collect(),
        }
    }

    fn skips_diagonal(&self) -> bool {
        matches!(self, PairFamily::PointPairs { .. })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanSettings {
    pub iterations: usize,
    /// Largest convergent denominator tested for periodicity.
    pub max_denominator: u64,
    pub periodicity_grid: usize,
    pub obstruction_samples: usize,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings { iterations: 100_000, max_denominator: 50, periodicity_grid: 64, obstruction_samples: 8 }
    }
}

/// One composed map `F = f_outer o f_inner` of the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub i: usize,
    pub j: usize,
    pub outer: Factor,
    pub inner: Factor,
    pub rotation_number: Option<f64>,
    pub error_bound: Option<f64>,
    /// Convergent `p/q` when the rotation number resolves as rational.
    pub convergent: Option<(u64, u64)>,
    pub periodicity_defect: Option<f64>,
    pub fixed_point_count: Option<usize>,
    pub reciprocity_defect: Option<f64>,
    pub linearization_obstruction: Option<f64>,
    /// Empty on success; otherwise the reason the row is incomplete.
    pub status: String,
}

pub const SCAN_COLUMNS: [&str; 12] = [
    "i",
    "j",
    "outer",
    "inner",
    "rotation_number",
    "error_bound",
    "convergent",
    "periodicity_defect",
    "fixed_point_count",
    "reciprocity_defect",
    "linearization_obstruction",
    "status",
];

fn scan_row(oval: &Arc<Oval>, i: usize, j: usize, outer: Factor, inner: Factor, cfg: &ScanSettings) -> ScanRow {
    let mut row = ScanRow {
        i,
        j,
        outer,
        inner,
        rotation_number: None,
        error_bound: None,
        convergent: None,
        periodicity_defect: None,
        fixed_point_count: None,
        reciprocity_defect: None,
        linearization_obstruction: None,
        status: String::new(),
    };
    let f = match CircleMap::pair(oval, outer, inner) {
        Ok(f) => f,
        Err(e) => {
            row.status = e.to_string();
            return row;
        }
    };
    match rotation_number(&f, 0.0, cfg.iterations) {
        Ok(r) => {
            row.rotation_number = Some(r.value);
            row.error_bound = Some(r.error_bound);
            if let Some((p, q)) = r.resolved_rational(cfg.max_denominator, r.error_bound) {
                row.convergent = Some((p, q));
                row.periodicity_defect = Some(periodicity_defect(&f, q as usize, cfg.periodicity_grid));
            }
        }
        Err(e) => row.status = e.to_string(),
    }
    if outer == inner {
        return row;
    }
    let fixed = fixed_points(&f).len();
    row.fixed_point_count = Some(fixed);
    if fixed == 2 {
        match mobius_reciprocity(&f) {
            Ok(d) => row.reciprocity_defect = Some(d.reciprocity_defect),
            Err(e) => row.status = e.to_string(),
        }
        match linearization_obstruction(&f, cfg.obstruction_samples) {
            Ok(v) => row.linearization_obstruction = Some(v),
            Err(DynamicsError::Parabolic(l)) => row.status = format!("parabolic multiplier {l}"),
            Err(e) => row.status = e.to_string(),
        }
    }
    row
}

/// Rotation numbers and Möbius diagnostics over a family of pencil pairs.
/// Rows are evaluated in parallel and returned in enumeration order.
pub fn conjugacy_scan(oval: &Arc<Oval>, family: &PairFamily, cfg: &ScanSettings) -> Result<Vec<ScanRow>, ExperimentError> {
    if cfg.iterations == 0 || cfg.periodicity_grid == 0 || cfg.obstruction_samples == 0 || cfg.max_denominator == 0 {
        return Err(ExperimentError::InvalidInput("scan settings must be positive".into()));
    }
    if let PairFamily::PointPairs { direction, .. } = family {
        if !(direction.norm() > 0.0) {
            return Err(ExperimentError::InvalidInput("point family needs a nonzero direction".into()));
        }
    }
    let factors = family.factors();
    if factors.is_empty() {
        return Err(ExperimentError::InvalidInput("family is empty".into()));
    }
    let n = factors.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(family.skips_diagonal() && i == j))
        .collect();
    Ok(pairs.into_par_iter().map(|(i, j)| scan_row(oval, i, j, factors[i], factors[j], cfg)).collect())
}
