use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{grid_params, CircleMap};
use crate::geometry::roots::bisect;
use crate::geometry::{affine_diameter, circle_distance, conjugate_direction, wrap_pi, GeometryError, Oval, PlanePoint, Vec2};

use super::ExperimentError;

/// Largest `|gamma(t + pi) + gamma(t)|` accepted as central symmetry,
/// relative to the curve scale.
pub const SYMMETRY_TOL: f64 = 1e-12;
const SYMMETRY_SAMPLES: usize = 256;
/// `F^2` counts as the identity below this displacement.
const INVOLUTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub curve: String,
    pub u: Vec2,
    pub v: Vec2,
    /// `F = f_u o f_v` squares to the identity, so every start closes.
    pub involutive: bool,
    /// Vertices `x, f_v(x), f_u f_v(x), f_v f_u f_v(x)`.
    pub parallelograms: Vec<[PlanePoint; 4]>,
    /// Largest distance of a parallelogram center from the origin.
    pub center_offset: f64,
    /// Largest distance of a side midpoint from the affine diameter
    /// conjugate to that side's direction.
    pub midpoint_defect: f64,
}

/// Largest `|gamma(t + pi) + gamma(t)|` over a grid; errors unless the
/// oval is centrally symmetric about the origin.
pub fn check_central_symmetry(oval: &Oval) -> Result<f64, ExperimentError> {
    if !oval.is_closed() {
        return Err(GeometryError::NotClosed.into());
    }
    let worst = grid_params(SYMMETRY_SAMPLES)
        .into_iter()
        .map(|t| (oval.point(t + PI) + oval.point(t)).norm())
        .fold(0.0, f64::max);
    if worst > SYMMETRY_TOL * oval.scale() {
        return Err(GeometryError::NotCentrallySymmetric(worst).into());
    }
    Ok(worst)
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Starting parameters of inscribed parallelograms with sides along `u`
/// and `v`: any grid when `F` is an involution, otherwise the period-2
/// points of `F`. These are sign changes of `F^2(x) - x` or touching
/// zeros, found as grid minima of `|F^2(x) - x|`.
fn period_two_starts(f: &CircleMap, samples: usize) -> (bool, Vec<f64>) {
    let grid = grid_params(samples.max(4));
    let disp = |x: f64| wrap_pi(f.iterate(x, 2) - x);
    let d: Vec<f64> = grid.iter().map(|&x| disp(x)).collect();
    if d.iter().all(|v| v.abs() <= INVOLUTION_TOL) {
        return (true, grid);
    }
    let n = grid.len();
    let h = grid[1] - grid[0];
    let mut starts = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (grid[i], grid[i] + h);
        let (da, db) = (d[i], d[j]);
        if da.abs() > FRAC_PI_2 || db.abs() > FRAC_PI_2 {
            continue;
        }
        if da == 0.0 {
            starts.push(a);
        } else if (da < 0.0) != (db < 0.0) && db != 0.0 {
            starts.push(bisect(disp, a, b, 1e-15));
        }
        let prev = d[(i + n - 1) % n].abs();
        if da.abs() <= prev && da.abs() <= db.abs() {
            let x = golden_min(|x| disp(x).abs(), a - h, b, 1e-12);
            if disp(x).abs() <= INVOLUTION_TOL {
                starts.push(x);
            }
        }
    }
    let mut starts: Vec<f64> = starts.into_iter().map(|x| x.rem_euclid(2.0 * PI)).collect();
    starts.sort_by(f64::total_cmp);
    starts.dedup_by(|x, y| circle_distance(*x, *y) < 1e-6);
    if starts.len() > 1 && circle_distance(starts[0], *starts.last().unwrap()) < 1e-6 {
        starts.pop();
    }
    (false, starts)
}

/// Inscribed parallelograms with sides along `u` and its conjugate
/// direction, and their defects against the centrally symmetric picture.
pub fn parallelogram_test(oval: &Arc<Oval>, u: Vec2, samples: usize) -> Result<DefectReport, ExperimentError> {
    if samples == 0 {
        return Err(ExperimentError::InvalidInput("sample count must be positive".into()));
    }
    check_central_symmetry(oval)?;
    let v = conjugate_direction(oval, u)?;
    let fu = CircleMap::involution_parallel(oval, u)?;
    let fv = CircleMap::involution_parallel(oval, v)?;
    let f = fu.compose(&fv)?;
    let (involutive, starts) = period_two_starts(&f, samples);
    let starts: Vec<f64> = if involutive {
        (0..samples).map(|i| PI * (i as f64 + 0.5) / samples as f64).collect()
    } else {
        starts
    };
    // sides along u have midpoints on the diameter of u, sides along v on
    // the diameter of v
    let diam_u = affine_diameter(oval, u)?.line();
    let diam_v = affine_diameter(oval, v)?.line();
    let mut parallelograms = Vec::with_capacity(starts.len());
    let (mut center_offset, mut midpoint_defect) = (0.0f64, 0.0f64);
    for x0 in starts {
        let x1 = fv.eval(x0);
        let x2 = fu.eval(x1);
        let x3 = fv.eval(x2);
        let p = [x0, x1, x2, x3].map(|t| oval.point(t));
        let center = (p[0] + p[1] + p[2] + p[3]) * 0.25;
        center_offset = center_offset.max(center.norm());
        let mid = |i: usize, j: usize| (p[i] + p[j]) * 0.5;
        midpoint_defect = midpoint_defect
            .max(diam_v.distance(mid(0, 1)))
            .max(diam_v.distance(mid(2, 3)))
            .max(diam_u.distance(mid(1, 2)))
            .max(diam_u.distance(mid(3, 0)));
        parallelograms.push(p);
    }
    Ok(DefectReport { curve: oval.spec().label(), u, v, involutive, parallelograms, center_offset, midpoint_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OvalSpec;

    fn arc(spec: OvalSpec) -> Arc<Oval> {
        Arc::new(Oval::new(spec).unwrap())
    }

    #[test]
    fn ellipse_parallelograms() {
        let r = parallelogram_test(&arc(OvalSpec::ellipse(2.0, 1.0)), Vec2::new(1.0, 0.0), 16).unwrap();
        assert!(r.involutive);
        assert_eq!(r.parallelograms.len(), 16);
        assert!(r.center_offset <= 1e-10 && r.midpoint_defect <= 1e-10, "{r:?}");
        let r = parallelogram_test(&arc(OvalSpec::circle(1.0)), Vec2::new(1.0, 1.0).normalized(), 8).unwrap();
        assert!(r.center_offset <= 1e-10 && r.midpoint_defect <= 1e-10, "{r:?}");
    }

    #[test]
    fn even_harmonic_oval_is_centered() {
        let o = arc(OvalSpec::fourier(1.0, &[(4, 0.03, 0.0)]));
        let r = parallelogram_test(&o, Vec2::from_angle(0.3), 64).unwrap();
        assert!(!r.involutive && !r.parallelograms.is_empty());
        assert!(r.center_offset <= 1e-9, "{r:?}");
    }

    #[test]
    fn asymmetric_oval_is_rejected() {
        let o = arc(OvalSpec::fourier(1.0, &[(3, 0.05, 0.0)]));
        assert!(matches!(
            parallelogram_test(&o, Vec2::new(1.0, 0.0), 8),
            Err(ExperimentError::Geometry(GeometryError::NotCentrallySymmetric(_)))
        ));
    }
}
