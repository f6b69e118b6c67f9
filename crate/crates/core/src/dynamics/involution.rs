use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geometry::roots::newton_bracketed;
use crate::geometry::{circle_distance, normalize_param, support_params, tangents_from_point, Oval, PlanePoint, Vec2};

use super::DynamicsError;

const NEWTON_TOL: f64 = 1e-15;

/// One pencil of lines: parallel to `u`, or through `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Parallel { u: Vec2 },
    Pencil { p: PlanePoint },
}

impl Factor {
    pub fn direction_angle(theta: f64) -> Self {
        Factor::Parallel { u: Vec2::from_angle(theta) }
    }

    pub fn point(x: f64, y: f64) -> Self {
        Factor::Pencil { p: Vec2::new(x, y) }
    }
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    /// Fixed parameters `c1 < c2` in `[0, 2 pi)` split the circle into two
    /// arcs exchanged by the map.
    Split { c1: f64, c2: f64 },
    /// Pencil through an interior point: no fixed points.
    Interior,
}

/// The second-intersection involution of a pencil on a closed oval.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Involution {
    pub factor: Factor,
    kind: Kind,
}

fn winds_around(oval: &Oval, p: PlanePoint) -> bool {
    oval.sample_params(256).into_iter().all(|t| {
        let [g, d] = oval.jet::<2>(t);
        (g - p).cross(d) > 0.0
    })
}

impl Involution {
    pub fn new(oval: &Oval, factor: Factor) -> Result<Self, DynamicsError> {
        if !oval.is_closed() {
            return Err(crate::geometry::GeometryError::NotClosed.into());
        }
        let kind = match factor {
            Factor::Parallel { u } => {
                let (c1, c2) = support_params(oval, u)?;
                Kind::Split { c1, c2 }
            }
            Factor::Pencil { p } => {
                if !p.is_finite() {
                    return Err(DynamicsError::InvalidInput("pencil point must be finite".into()));
                }
                if winds_around(oval, p) {
                    Kind::Interior
                } else {
                    let (c1, c2) = tangents_from_point(oval, p)?;
                    Kind::Split { c1, c2 }
                }
            }
        };
        Ok(Involution { factor, kind })
    }

    #[cfg(test)]
    pub fn fixed_points(&self) -> Option<(f64, f64)> {
        match self.kind {
            Kind::Split { c1, c2 } => Some((c1, c2)),
            Kind::Interior => None,
        }
    }

    /// Pencils through interior points act like the antipodal map and keep
    /// the orientation; all others reverse it.
    pub fn reverses_orientation(&self) -> bool {
        matches!(self.kind, Kind::Split { .. })
    }

    /// `G(s)` vanishing when `gamma(s)` is on the pencil line through
    /// `gamma(t)`, with `dG/ds`.
    fn incidence(&self, oval: &Oval, gt: Vec2, s: f64) -> (f64, f64) {
        let [gs, ds] = oval.jet::<2>(s);
        match self.factor {
            Factor::Parallel { u } => (u.cross(gs - gt), u.cross(ds)),
            Factor::Pencil { p } => ((gt - p).cross(gs - p), (gt - p).cross(ds)),
        }
    }

    pub fn eval(&self, oval: &Oval, t: f64) -> f64 {
        let t = normalize_param(oval, t);
        let gt = oval.point(t);
        match self.kind {
            Kind::Split { c1, c2 } => {
                if circle_distance(t, c1) < 1e-14 {
                    return c1;
                }
                if circle_distance(t, c2) < 1e-14 {
                    return c2;
                }
                let (t, own, other) = if c1 < t && t < c2 {
                    (t, (c1, c2), (c2, c1 + TAU))
                } else {
                    let t = if t < c1 { t + TAU } else { t };
                    (t, (c2, c1 + TAU), (c1, c2))
                };
                // the orientation-reversing affine map between the arcs
                let guess = other.0 + (own.1 - t) * (other.1 - other.0) / (own.1 - own.0);
                let s = newton_bracketed(|s| self.incidence(oval, gt, s), other.0, other.1, guess, NEWTON_TOL);
                normalize_param(oval, s)
            }
            Kind::Interior => {
                let Factor::Pencil { p } = self.factor else { unreachable!("interior kind is a pencil") };
                let dt = gt - p;
                // angle of gamma(s) - p seen from gamma(t) - p increases
                // monotonically from 0 to 2 pi; bracket the half turn
                let psi = |s: f64| {
                    let ds = oval.point(s) - p;
                    dt.cross(ds).atan2(dt.dot(ds)).rem_euclid(TAU)
                };
                let (mut lo, mut hi) = (t, t + TAU);
                let mut guess = t + PI;
                for _ in 0..60 {
                    let v = psi(guess);
                    if v < PI {
                        lo = guess;
                    } else {
                        hi = guess;
                    }
                    let settled = |x: f64| (psi(x) - PI).abs() < 0.5 * PI;
                    if settled(lo) && settled(hi) {
                        break;
                    }
                    guess = 0.5 * (lo + hi);
                }
                let s = newton_bracketed(|s| self.incidence(oval, gt, s), lo, hi, 0.5 * (lo + hi), NEWTON_TOL);
                normalize_param(oval, s)
            }
        }
    }

    /// `ds/dt` at the pair `(t, s = f(t))`, from the implicit-function rule
    /// on the incidence condition; `-1` at fixed points.
    pub fn derivative(&self, oval: &Oval, t: f64, s: f64) -> f64 {
        if circle_distance(t, s) < 1e-12 {
            return -1.0;
        }
        let [gt, dt] = oval.jet::<2>(t);
        let [gs, ds] = oval.jet::<2>(s);
        match self.factor {
            Factor::Parallel { u } => u.cross(dt) / u.cross(ds),
            Factor::Pencil { p } => -dt.cross(gs - p) / (gt - p).cross(ds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OvalSpec;
    use std::f64::consts::FRAC_PI_6;

    fn near(a: f64, b: f64, tol: f64) {
        assert!(circle_distance(a, b) <= tol, "{a} vs {b}");
    }

    #[test]
    fn horizontal_chords_of_circle() {
        let c = Oval::new(OvalSpec::circle(1.0)).unwrap();
        let f = Involution::new(&c, Factor::Parallel { u: Vec2::new(1.0, 0.0) }).unwrap();
        near(f.eval(&c, FRAC_PI_6), 5.0 * FRAC_PI_6, 1e-14);
        near(f.eval(&c, PI / 2.0), PI / 2.0, 1e-14);
        near(f.derivative(&c, 0.3, f.eval(&c, 0.3)), -1.0, 1e-13);
        let e = Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap();
        let f = Involution::new(&e, Factor::Parallel { u: Vec2::new(1.0, 0.0) }).unwrap();
        for t in [0.1, 1.0, 2.0, 4.0, 6.0] {
            near(f.eval(&e, t), PI - t, 1e-13);
        }
    }

    #[test]
    fn pencils_on_circle() {
        let c = Oval::new(OvalSpec::circle(1.0)).unwrap();
        let f = Involution::new(&c, Factor::point(2.0, 0.0)).unwrap();
        near(f.eval(&c, 0.0), PI, 1e-14);
        let (c1, c2) = f.fixed_points().unwrap();
        near(c1.cos(), 0.5, 1e-14);
        near(c2.cos(), 0.5, 1e-14);
        let g = Involution::new(&c, Factor::point(0.0, 0.0)).unwrap();
        assert!(g.fixed_points().is_none());
        for t in [0.0, 1.0, 3.0, 5.0] {
            near(g.eval(&c, t), t + PI, 1e-14);
        }
        assert!(Involution::new(&c, Factor::point(1.0, 0.0)).is_err());
    }

    #[test]
    fn involution_property_and_derivatives() {
        let o = Oval::new(OvalSpec::fourier(1.0, &[(3, 0.05, 0.0), (2, 0.02, 0.03)])).unwrap();
        for factor in [Factor::point(0.1, 0.2), Factor::point(2.5, -1.0), Factor::direction_angle(0.7)] {
            let f = Involution::new(&o, factor).unwrap();
            for i in 0..64 {
                let t = TAU * (i as f64 + 0.5) / 64.0;
                let s = f.eval(&o, t);
                near(f.eval(&o, s), t, 1e-11);
                let h = 1e-6;
                let fd = crate::geometry::wrap_pi(f.eval(&o, t + h) - f.eval(&o, t - h)) / (2.0 * h);
                let d = f.derivative(&o, t, s);
                assert!((fd - d).abs() <= 1e-5 * (1.0 + d.abs()), "{factor:?} t={t}: {fd} vs {d}");
                assert_eq!(d < 0.0, f.reverses_orientation());
            }
        }
    }
}
