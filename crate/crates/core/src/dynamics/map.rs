use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

use serde::Serialize;

use crate::geometry::{circle_distance, normalize_param, wrap_pi, Oval};

use super::involution::{Factor, Involution};
use super::DynamicsError;

/// A composition of pencil involutions acting on an oval's parameter
/// circle. Factors are stored outermost first and applied right to left.
#[derive(Clone, Debug)]
pub struct CircleMap {
    oval: Arc<Oval>,
    factors: Vec<Involution>,
}

impl CircleMap {
    pub fn identity(oval: &Arc<Oval>) -> Self {
        CircleMap { oval: oval.clone(), factors: Vec::new() }
    }

    pub fn involution(oval: &Arc<Oval>, factor: Factor) -> Result<Self, DynamicsError> {
        Ok(CircleMap { oval: oval.clone(), factors: vec![Involution::new(oval, factor)?] })
    }

    /// `f_u` for the direction `u`.
    pub fn involution_parallel(oval: &Arc<Oval>, u: crate::geometry::Vec2) -> Result<Self, DynamicsError> {
        Self::involution(oval, Factor::Parallel { u })
    }

    /// `f_P` for the pencil through `p`.
    pub fn involution_pencil(oval: &Arc<Oval>, p: crate::geometry::PlanePoint) -> Result<Self, DynamicsError> {
        Self::involution(oval, Factor::Pencil { p })
    }

    /// `f_a o f_b`.
    pub fn pair(oval: &Arc<Oval>, a: Factor, b: Factor) -> Result<Self, DynamicsError> {
        Self::involution(oval, a)?.compose(&Self::involution(oval, b)?)
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &CircleMap) -> Result<CircleMap, DynamicsError> {
        if !Arc::ptr_eq(&self.oval, &inner.oval) && self.oval.spec() != inner.oval.spec() {
            return Err(DynamicsError::OvalMismatch);
        }
        let mut factors = self.factors.clone();
        factors.extend(inner.factors.iter().cloned());
        Ok(CircleMap { oval: self.oval.clone(), factors })
    }

    /// Each factor is its own inverse, so the inverse reverses the order.
    pub fn inverse(&self) -> CircleMap {
        CircleMap { oval: self.oval.clone(), factors: self.factors.iter().rev().cloned().collect() }
    }

    pub fn oval(&self) -> &Arc<Oval> {
        &self.oval
    }

    pub fn factors(&self) -> Vec<Factor> {
        self.factors.iter().map(|f| f.factor).collect()
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn preserves_orientation(&self) -> bool {
        self.factors.iter().filter(|f| f.reverses_orientation()).count() % 2 == 0
    }

    /// Image of `t`, in `[0, 2 pi)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.factors.iter().rev().fold(normalize_param(&self.oval, t), |x, f| f.eval(&self.oval, x))
    }

    /// Image and derivative by the chain rule through the factors.
    pub fn eval_with_derivative(&self, t: f64) -> (f64, f64) {
        let mut x = normalize_param(&self.oval, t);
        let mut d = 1.0;
        for f in self.factors.iter().rev() {
            let y = f.eval(&self.oval, x);
            d *= f.derivative(&self.oval, x, y);
            x = y;
        }
        (x, d)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval_with_derivative(t).1
    }

    pub fn iterate(&self, t: f64, n: usize) -> f64 {
        (0..n).fold(t, |x, _| self.eval(x))
    }

    /// Continuous lift of an orientation-preserving map.
    pub fn lift(&self) -> Result<Lift<'_>, DynamicsError> {
        Lift::new(self)
    }
}

const LIFT_GRID: usize = 256;
const LIFT_MAX_NODES: usize = 1 << 16;

/// A lift `R -> R` of a degree-one circle map, tabulated on a grid whose
/// steps in the image never exceed a quarter turn.
pub struct Lift<'a> {
    map: &'a CircleMap,
    xs: Vec<f64>,
    ls: Vec<f64>,
}

impl<'a> Lift<'a> {
    fn new(map: &'a CircleMap) -> Result<Self, DynamicsError> {
        if !map.preserves_orientation() {
            return Err(DynamicsError::OrientationReversing);
        }
        let mut xs = vec![0.0];
        let mut ls = vec![map.eval(0.0)];
        let mut stack: Vec<(f64, f64)> = (0..LIFT_GRID)
            .rev()
            .map(|i| (TAU * i as f64 / LIFT_GRID as f64, TAU * (i + 1) as f64 / LIFT_GRID as f64))
            .collect();
        while let Some((a, b)) = stack.pop() {
            let fb = map.eval(b);
            let step = wrap_pi(fb - ls.last().copied().unwrap_or(0.0));
            if step.abs() > FRAC_PI_2 {
                if xs.len() + stack.len() > LIFT_MAX_NODES || b - a < 1e-12 {
                    return Err(DynamicsError::NoConvergence("lift refinement did not settle".into()));
                }
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
                continue;
            }
            xs.push(b);
            ls.push(ls.last().unwrap() + step);
        }
        let degree = (ls.last().unwrap() - ls[0]) / TAU;
        if (degree - 1.0).abs() > 1e-6 {
            return Err(DynamicsError::NotDegreeOne(degree));
        }
        Ok(Lift { map, xs, ls })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let turns = (x / TAU).floor();
        let r = x - turns * TAU;
        let i = self.xs.partition_point(|&v| v <= r).saturating_sub(1);
        let base = self.ls[i];
        base + wrap_pi(self.map.eval(r) - base) + turns * TAU
    }
}

/// Birkhoff estimate of the rotation number.
#[derive(Clone, Debug, Serialize)]
pub struct RotationEstimate {
    /// In `[0, 1)`.
    pub value: f64,
    pub iterations: usize,
    pub error_bound: f64,
    /// Continued-fraction convergents `p/q` of `value`.
    pub convergents: Vec<(u64, u64)>,
}

impl RotationEstimate {
    /// Best convergent with denominator at most `max_q`.
    pub fn nearest_convergent(&self, max_q: u64) -> (u64, u64) {
        self.convergents.iter().copied().rfind(|&(_, q)| q <= max_q).unwrap_or((0, 1))
    }

    /// `p/q` when the estimate is within `tol` of a convergent with
    /// `q <= max_q`; `1/1` is reported as `0/1`.
    pub fn resolved_rational(&self, max_q: u64, tol: f64) -> Option<(u64, u64)> {
        let (p, q) = self.nearest_convergent(max_q);
        let gap = (self.value - p as f64 / q as f64).abs();
        let gap = gap.min(1.0 - gap);
        (gap <= tol).then_some(if p == q { (0, 1) } else { (p, q) })
    }
}

/// Convergents of the continued fraction of `x`, stopping at denominators
/// above `max_q` or when the remainder vanishes.
pub fn convergents(x: f64, max_q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_q {
            break;
        }
        out.push((p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - r.floor();
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Rotation number from `n` iterates of the lift started at `x0`; the
/// error is at most `1/n`.
pub fn rotation_number(f: &CircleMap, x0: f64, n: usize) -> Result<RotationEstimate, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::InvalidInput("iteration count must be positive".into()));
    }
    let lift = f.lift()?;
    let mut y = x0;
    for _ in 0..n {
        y = lift.eval(y);
    }
    let value = ((y - x0) / (TAU * n as f64)).rem_euclid(1.0);
    let value = if value >= 1.0 { 0.0 } else { value };
    Ok(RotationEstimate { value, iterations: n, error_bound: 1.0 / n as f64, convergents: convergents(value, 1_000_000) })
}

/// Largest circle distance between `F^q(x)` and `x` over `grid` points.
pub fn periodicity_defect(f: &CircleMap, q: usize, grid: usize) -> f64 {
    grid_params(grid).into_iter().map(|x| circle_distance(f.iterate(x, q), x)).fold(0.0, f64::max)
}

pub(crate) fn grid_params(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

const FIXED_POINT_GRID: usize = 512;

/// Fixed points in `[0, 2 pi)`, from sign changes of `F(x) - x` (taken in
/// `(-pi, pi]`) away from the half-turn branch cut.
pub fn fixed_points(f: &CircleMap) -> Vec<f64> {
    let xs = grid_params(FIXED_POINT_GRID);
    let d: Vec<f64> = xs.iter().map(|&x| wrap_pi(f.eval(x) - x)).collect();
    let mut out = Vec::new();
    for i in 0..FIXED_POINT_GRID {
        let j = (i + 1) % FIXED_POINT_GRID;
        let (a, b) = (xs[i], if j == 0 { TAU } else { xs[j] });
        let (da, db) = (d[i], d[j]);
        if da.abs() > FRAC_PI_2 || db.abs() > FRAC_PI_2 {
            continue;
        }
        if da == 0.0 {
            out.push(a);
            continue;
        }
        if (da < 0.0) != (db < 0.0) && db != 0.0 {
            let x = crate::geometry::roots::newton_bracketed(
                |x| {
                    let (y, dy) = f.eval_with_derivative(x);
                    (wrap_pi(y - x), dy - 1.0)
                },
                a,
                b,
                0.5 * (a + b),
                1e-15,
            );
            out.push(normalize_param(f.oval(), x));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| circle_distance(*a, *b) < 1e-12);
    if out.len() > 1 && circle_distance(out[0], *out.last().unwrap()) < 1e-12 {
        out.pop();
    }
    out
}

/// `max |f_Q(f_P(f_Q(x))) - f_P(x)|` on the parameter circle.
pub fn involution_identity_defect(oval: &Arc<Oval>, p: crate::geometry::PlanePoint, q: crate::geometry::PlanePoint, grid: usize) -> Result<f64, DynamicsError> {
    let fp = CircleMap::involution_pencil(oval, p)?;
    let fq = CircleMap::involution_pencil(oval, q)?;
    let lhs = fq.compose(&fp)?.compose(&fq)?;
    Ok(grid_params(grid).into_iter().map(|x| circle_distance(lhs.eval(x), fp.eval(x))).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{OvalSpec, Vec2};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn circle() -> Arc<Oval> {
        Arc::new(Oval::new(OvalSpec::circle(1.0)).unwrap())
    }

    #[test]
    fn involutions_square_to_identity() {
        let c = circle();
        let f = CircleMap::involution_parallel(&c, Vec2::new(1.0, 0.3)).unwrap();
        let ff = f.compose(&f).unwrap();
        for x in grid_params(64) {
            assert!(circle_distance(ff.eval(x), x) < 1e-12);
        }
        assert!(!f.preserves_orientation() && ff.preserves_orientation());
        assert!(f.lift().is_err());
    }

    #[test]
    fn circle_pair_is_a_rotation() {
        let c = circle();
        let f = CircleMap::pair(&c, Factor::direction_angle(0.0), Factor::direction_angle(FRAC_PI_4)).unwrap();
        for x in grid_params(16) {
            assert!(circle_distance(f.eval(x), x - PI / 2.0) < 1e-13);
        }
        let r = rotation_number(&f, 0.1, 1000).unwrap();
        assert!((r.value - 0.75).abs() < 1e-12, "{}", r.value);
        assert_eq!(r.nearest_convergent(50), (3, 4));
        let g = CircleMap::pair(&c, Factor::direction_angle(FRAC_PI_4), Factor::direction_angle(0.0)).unwrap();
        assert!((rotation_number(&g, 0.1, 1000).unwrap().value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn identity_rotation_is_zero() {
        let c = circle();
        let id = CircleMap::identity(&c);
        assert_eq!(rotation_number(&id, 0.3, 10).unwrap().value, 0.0);
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(convergents(0.25, 100), vec![(0, 1), (1, 4)]);
        let pi_frac = convergents(PI, 10_000);
        assert_eq!(&pi_frac[..4], &[(3, 1), (22, 7), (333, 106), (355, 113)]);
    }

    #[test]
    fn fixed_points_of_pencil_pairs() {
        let c = circle();
        let f = CircleMap::pair(&c, Factor::point(2.0, 0.0), Factor::point(3.0, 0.0)).unwrap();
        let fp = fixed_points(&f);
        assert_eq!(fp.len(), 2);
        assert!(fp.iter().any(|&x| circle_distance(x, 0.0) < 1e-12));
        assert!(fp.iter().any(|&x| circle_distance(x, PI) < 1e-12));
        let h = CircleMap::pair(&c, Factor::point(0.0, 0.0), Factor::point(0.5, 0.0)).unwrap();
        assert!(h.preserves_orientation());
        let fh = fixed_points(&h);
        assert_eq!(fh.len(), 2);
        assert!(fh.iter().any(|&x| circle_distance(x, PI) < 1e-12));
        let g = CircleMap::pair(&c, Factor::point(2.0, 0.0), Factor::point(0.0, 3.0)).unwrap();
        assert!(fixed_points(&g).is_empty());
    }

    #[test]
    fn identity_defect_needs_conjugate_points() {
        // Q on the polar of P: the two reflections commute
        let d = involution_identity_defect(&circle(), Vec2::new(2.0, 0.0), Vec2::new(0.5, 3.0), 64).unwrap();
        assert!(d < 1e-10, "{d}");
        let e = Arc::new(Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap());
        let d = involution_identity_defect(&e, Vec2::new(3.0, 0.0), Vec2::new(4.0 / 3.0, 2.0), 64).unwrap();
        assert!(d < 1e-9, "{d}");
        let d = involution_identity_defect(&circle(), Vec2::new(2.0, 0.0), Vec2::new(3.0, 0.0), 64).unwrap();
        assert!(d > 0.1, "{d}");
    }
}
