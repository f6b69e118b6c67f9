use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::GeometryError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Points and vectors share one representation.
pub type PlanePoint = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// `det[self, o]`
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Vec2 {
        self * (1.0 / self.norm())
    }

    /// Rotated by a quarter turn counterclockwise.
    pub fn perp(self) -> Vec2 {
        Vec2 { x: -self.y, y: self.x }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lift(self) -> [f64; 3] {
        [self.x, self.y, 1.0]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

fn cross3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn norm3(u: [f64; 3]) -> f64 {
    (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt()
}

/// Line `l1 x + l2 y + l3 = 0`, defined up to scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjLine {
    pub l: [f64; 3],
}

impl ProjLine {
    pub fn new(l: [f64; 3]) -> Result<Self, GeometryError> {
        if l[0] == 0.0 && l[1] == 0.0 {
            return Err(GeometryError::Degenerate("line with zero normal".into()));
        }
        Ok(ProjLine { l })
    }

    pub fn through(p: PlanePoint, dir: Vec2) -> Self {
        ProjLine { l: cross3(p.lift(), [dir.x, dir.y, 0.0]) }
    }

    pub fn normal(&self) -> Vec2 {
        Vec2::new(self.l[0], self.l[1])
    }

    /// `l . lift(p)`
    pub fn eval(&self, p: PlanePoint) -> f64 {
        self.l[0] * p.x + self.l[1] * p.y + self.l[2]
    }

    /// Signed Euclidean distance from `p`.
    pub fn signed_distance(&self, p: PlanePoint) -> f64 {
        self.eval(p) / self.normal().norm()
    }

    pub fn distance(&self, p: PlanePoint) -> f64 {
        self.signed_distance(p).abs()
    }

    /// Scaled to unit normal with a canonical sign (first nonzero of
    /// `l1, l2` positive), for comparison.
    pub fn canonical(&self) -> [f64; 3] {
        let n = self.normal().norm();
        let s = if self.l[0].abs() > 1e-300 { self.l[0].signum() } else { self.l[1].signum() };
        [self.l[0] * s / n, self.l[1] * s / n, self.l[2] * s / n]
    }

    pub fn contains(&self, p: PlanePoint, tol: f64) -> bool {
        self.eval(p).abs() <= tol * norm3(self.l) * norm3(p.lift())
    }

    pub fn direction(&self) -> Vec2 {
        Vec2::new(self.l[1], -self.l[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Meet {
    Point(PlanePoint),
    /// Parallel lines; the common direction.
    AtInfinity(Vec2),
}

impl Meet {
    pub fn point(self) -> Option<PlanePoint> {
        match self {
            Meet::Point(p) => Some(p),
            Meet::AtInfinity(_) => None,
        }
    }
}

pub fn line_join(p1: PlanePoint, p2: PlanePoint) -> Result<ProjLine, GeometryError> {
    let l = cross3(p1.lift(), p2.lift());
    let scale = 1f64.max(p1.norm()).max(p2.norm());
    if (p1 - p2).norm() <= 1e-15 * scale {
        return Err(GeometryError::Degenerate("coincident points".into()));
    }
    Ok(ProjLine { l })
}

pub fn line_meet(a: &ProjLine, b: &ProjLine) -> Result<Meet, GeometryError> {
    let m = cross3(a.l, b.l);
    let scale = norm3(a.l) * norm3(b.l);
    if norm3(m) <= 1e-15 * scale {
        return Err(GeometryError::Degenerate("identical lines".into()));
    }
    // the third coordinate is det of the normals
    if m[2].abs() <= 1e-14 * scale {
        return Ok(Meet::AtInfinity(Vec2::new(m[0], m[1]).normalized()));
    }
    Ok(Meet::Point(Vec2::new(m[0] / m[2], m[1] / m[2])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same_line(l: &ProjLine, want: [f64; 3]) {
        let w = ProjLine { l: want }.canonical();
        let g = l.canonical();
        for i in 0..3 {
            assert!((g[i] - w[i]).abs() < 1e-14, "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn joins() {
        same_line(&line_join(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap(), [0.0, 1.0, 0.0]);
        same_line(&line_join(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap(), [1.0, 1.0, -1.0]);
        same_line(&line_join(Vec2::new(2.0, 0.0), Vec2::new(3.0, 0.0)).unwrap(), [0.0, 1.0, 0.0]);
        assert!(line_join(Vec2::new(1.0, 2.0), Vec2::new(1.0, 2.0)).is_err());
    }

    #[test]
    fn meets() {
        let x0 = ProjLine::new([1.0, 0.0, 0.0]).unwrap();
        let y0 = ProjLine::new([0.0, 1.0, 0.0]).unwrap();
        let y1 = ProjLine::new([0.0, 1.0, -1.0]).unwrap();
        assert_eq!(line_meet(&x0, &y0).unwrap(), Meet::Point(Vec2::ZERO));
        match line_meet(&y0, &y1).unwrap() {
            Meet::AtInfinity(d) => assert!((d.cross(Vec2::new(1.0, 0.0))).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(line_meet(&y0, &ProjLine::new([0.0, 3.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn circle_tangents_meet_on_axis() {
        // x cos t + y sin t = 1 at t = +-pi/3
        let t = std::f64::consts::FRAC_PI_3;
        let l1 = ProjLine::new([t.cos(), t.sin(), -1.0]).unwrap();
        let l2 = ProjLine::new([t.cos(), -t.sin(), -1.0]).unwrap();
        let p = line_meet(&l1, &l2).unwrap().point().unwrap();
        assert!((p - Vec2::new(2.0, 0.0)).norm() < 1e-14);
        assert!(l1.contains(p, 1e-14) && l2.contains(p, 1e-14));
    }
}
