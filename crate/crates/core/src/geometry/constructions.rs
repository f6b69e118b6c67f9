use std::f64::consts::TAU;

use serde::Serialize;

use super::oval::{Domain, Oval};
use super::primitives::{line_join, PlanePoint, ProjLine, Vec2};
use super::roots::{bisect, sign_change_brackets};
use super::GeometryError;

/// Samples used to bracket roots along the curve.
pub const ROOT_SAMPLES: usize = 256;
/// Lines whose closest approach is within this (times the scale) of the
/// curve count as tangent.
pub const TANGENCY_BAND: f64 = 1e-10;
const BISECT_WIDTH: f64 = 1e-14;

/// Reduces a closed-curve parameter to `[0, 2 pi)`; arc parameters pass
/// through.
pub fn normalize_param(oval: &Oval, t: f64) -> f64 {
    if oval.is_closed() {
        let r = t.rem_euclid(TAU);
        if r >= TAU {
            0.0
        } else {
            r
        }
    } else {
        t
    }
}

/// Distance on the parameter circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

/// Representative of `x` modulo `2 pi` in `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

/// Roots of `f` over the curve's parameter domain. `f` returns the value
/// and the derivative in `t`.
pub(crate) fn curve_roots<F>(oval: &Oval, f: F) -> Vec<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let ts = oval.sample_params(ROOT_SAMPLES);
    let vals: Vec<f64> = ts.iter().map(|&t| f(t).0).collect();
    let mut roots = Vec::new();
    for (lo, hi) in sign_change_brackets(&ts, &vals, oval.is_closed(), TAU) {
        roots.push(polish(&f, lo, hi));
    }
    finish_roots(oval, roots)
}

fn polish<F: Fn(f64) -> (f64, f64)>(f: &F, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let r = bisect(|t| f(t).0, lo, hi, BISECT_WIDTH);
    let (v, d) = f(r);
    let step = v / d;
    if d != 0.0 && step.is_finite() && step.abs() <= BISECT_WIDTH {
        r - step
    } else {
        r
    }
}

fn finish_roots(oval: &Oval, roots: Vec<f64>) -> Vec<f64> {
    let mut roots: Vec<f64> = roots.into_iter().map(|t| normalize_param(oval, t)).collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| circle_distance(*a, *b) < 1e-12);
    if oval.is_closed() && roots.len() > 1 && circle_distance(roots[0], *roots.last().unwrap()) < 1e-12 {
        roots.pop();
    }
    roots
}

/// Parameters where the curve meets the line: 0, 1 (tangent within
/// [`TANGENCY_BAND`]) or 2 for a closed oval.
pub fn intersect_line_oval(oval: &Oval, l: &ProjLine) -> Vec<f64> {
    let n = l.normal();
    let inv = 1.0 / n.norm();
    let r = |t: f64| {
        let [p, d] = oval.jet::<2>(t);
        (l.eval(p) * inv, n.dot(d) * inv)
    };
    let ts = oval.sample_params(ROOT_SAMPLES);
    let vals: Vec<f64> = ts.iter().map(|&t| r(t).0).collect();
    let mut roots = Vec::new();
    for (lo, hi) in sign_change_brackets(&ts, &vals, oval.is_closed(), TAU) {
        roots.push(polish(&r, lo, hi));
    }
    // pairs of roots (or a tangency) hidden inside one sample interval
    let derivs: Vec<f64> = ts.iter().map(|&t| r(t).1).collect();
    for (lo, hi) in sign_change_brackets(&ts, &derivs, oval.is_closed(), TAU) {
        let ext = bisect(|t| r(t).1, lo, hi, BISECT_WIDTH);
        let v_ext = r(ext).0;
        let v_lo = r(lo).0;
        let v_hi = r(hi).0;
        let same_side = (v_lo > 0.0) == (v_hi > 0.0);
        if !same_side {
            continue;
        }
        if (v_ext > 0.0) != (v_lo > 0.0) && v_ext != 0.0 {
            roots.push(polish(&r, lo, ext));
            roots.push(polish(&r, ext, hi));
        } else if v_ext.abs() <= TANGENCY_BAND * oval.scale() {
            roots.push(ext);
        }
    }
    finish_roots(oval, roots)
}

fn check_off_curve(oval: &Oval, a: PlanePoint) -> Result<(), GeometryError> {
    let tol = 1e-12 * oval.scale();
    let near = oval.sample_params(ROOT_SAMPLES).into_iter().map(|t| (oval.point(t) - a).norm()).fold(f64::INFINITY, f64::min);
    if near > 0.1 * oval.scale() {
        return Ok(());
    }
    // refine the closest approach: d/dt |gamma - a|^2 / 2 = (gamma - a) . gamma'
    let roots = curve_roots(oval, |t| {
        let [p, d1, d2] = oval.jet::<3>(t);
        ((p - a).dot(d1), d1.dot(d1) + (p - a).dot(d2))
    });
    if roots.iter().any(|&t| (oval.point(t) - a).norm() <= tol) {
        return Err(GeometryError::NotExterior(format!("point ({}, {}) lies on the curve", a.x, a.y)));
    }
    Ok(())
}

/// Tangency parameters of the two tangent lines through the exterior point
/// `a`, in increasing order.
pub fn tangents_from_point(oval: &Oval, a: PlanePoint) -> Result<(f64, f64), GeometryError> {
    check_off_curve(oval, a)?;
    let roots = curve_roots(oval, |t| {
        let [p, d1, d2] = oval.jet::<3>(t);
        ((p - a).cross(d1), (p - a).cross(d2))
    });
    match roots.as_slice() {
        [t1, t2] => Ok((*t1, *t2)),
        other => Err(GeometryError::NotExterior(format!(
            "point ({}, {}) has {} tangency points on the curve, expected 2",
            a.x,
            a.y,
            other.len()
        ))),
    }
}

/// The arc between the tangency points that faces `a`, as `(start, end)`
/// with `end > start`.
pub fn visible_arc(oval: &Oval, a: PlanePoint, t1: f64, t2: f64) -> (f64, f64) {
    if !oval.is_closed() {
        return (t1.min(t2), t1.max(t2));
    }
    let chord = ProjLine::through(oval.point(t1), oval.point(t2) - oval.point(t1));
    let side = chord.eval(a).signum();
    let (s, e) = (t1.min(t2), t1.max(t2));
    let mid = oval.point(0.5 * (s + e));
    if chord.eval(mid).signum() == side {
        (s, e)
    } else {
        (e, s + TAU)
    }
}

/// The line through the two tangency points seen from `a`.
pub fn chord_of_contact(oval: &Oval, a: PlanePoint) -> Result<ProjLine, GeometryError> {
    let (t1, t2) = tangents_from_point(oval, a)?;
    line_join(oval.point(t1), oval.point(t2))
}

/// Affine curvature at `t` for an arbitrary regular parameterization.
///
/// With `D = det(g', g'')`:
/// `k = D^(-5/3) [4/3 det(g'', g''') + 1/3 det(g', g'''')] - 5/9 D^(-8/3) det(g', g''')^2`.
pub fn affine_curvature(oval: &Oval, t: f64) -> Result<f64, GeometryError> {
    oval.check_param(t)?;
    let [_, d1, d2, d3, d4] = oval.jet::<5>(t);
    let d = d1.cross(d2);
    if !(d > 0.0) {
        return Err(GeometryError::Degenerate(format!("det(g', g'') = {d} at t = {t}")));
    }
    let a = d2.cross(d3);
    let b = d1.cross(d4);
    let c = d1.cross(d3);
    Ok(d.powf(-5.0 / 3.0) * (4.0 / 3.0 * a + b / 3.0) - 5.0 / 9.0 * d.powf(-8.0 / 3.0) * c * c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chord {
    pub t1: f64,
    pub t2: f64,
    pub endpoints: [PlanePoint; 2],
}

impl Chord {
    pub fn direction(&self) -> Vec2 {
        self.endpoints[1] - self.endpoints[0]
    }

    pub fn line(&self) -> ProjLine {
        ProjLine::through(self.endpoints[0], self.direction())
    }

    pub fn midpoint(&self) -> PlanePoint {
        (self.endpoints[0] + self.endpoints[1]) * 0.5
    }
}

fn require_closed(oval: &Oval) -> Result<(), GeometryError> {
    match oval.domain() {
        Domain::Closed => Ok(()),
        Domain::Arc { .. } => Err(GeometryError::NotClosed),
    }
}

/// Parameters where the tangent is parallel to `u`, in increasing order.
pub fn support_params(oval: &Oval, u: Vec2) -> Result<(f64, f64), GeometryError> {
    require_closed(oval)?;
    if !(u.norm() > 0.0) {
        return Err(GeometryError::Degenerate("zero direction".into()));
    }
    let roots = curve_roots(oval, |t| {
        let [_, d1, d2] = oval.jet::<3>(t);
        (d1.cross(u), d2.cross(u))
    });
    match roots.as_slice() {
        [t1, t2] => Ok((*t1, *t2)),
        other => Err(GeometryError::NoRoot(format!("expected 2 support points, found {}", other.len()))),
    }
}

/// Chord joining the tangency points of the two support lines parallel
/// to `u`.
pub fn affine_diameter(oval: &Oval, u: Vec2) -> Result<Chord, GeometryError> {
    let (t1, t2) = support_params(oval, u)?;
    Ok(Chord { t1, t2, endpoints: [oval.point(t1), oval.point(t2)] })
}

/// Unit direction of the affine diameter for `u`, oriented so that
/// `det(u, v) > 0`.
pub fn conjugate_direction(oval: &Oval, u: Vec2) -> Result<Vec2, GeometryError> {
    let v = affine_diameter(oval, u)?.direction().normalized();
    Ok(if u.cross(v) < 0.0 { -v } else { v })
}
