use std::f64::consts::TAU;

use serde::Serialize;

use crate::geometry::wrap_pi;

use super::map::{fixed_points, CircleMap};
use super::DynamicsError;

/// Multipliers closer than this to 1 are treated as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-4;

const KOENIGS_REL_TOL: f64 = 1e-10;
const KOENIGS_MIN_DISPLACEMENT: f64 = 1e-5;
const KOENIGS_MAX_STEPS: usize = 60;

#[derive(Clone, Debug, Serialize)]
pub struct MobiusDiagnostics {
    pub fixed_points: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub reciprocity_defect: f64,
    pub linearization_obstruction: Option<f64>,
}

/// Fixed points, multipliers and `|l1 l2 - 1|`.
pub fn mobius_reciprocity(f: &CircleMap) -> Result<MobiusDiagnostics, DynamicsError> {
    if !f.preserves_orientation() {
        return Err(DynamicsError::OrientationReversing);
    }
    let fixed = fixed_points(f);
    if fixed.len() != 2 {
        return Err(DynamicsError::FixedPointCount(fixed.len()));
    }
    let derivatives: Vec<f64> = fixed.iter().map(|&c| f.derivative(c)).collect();
    let reciprocity_defect = (derivatives[0] * derivatives[1] - 1.0).abs();
    Ok(MobiusDiagnostics { fixed_points: fixed, derivatives, reciprocity_defect, linearization_obstruction: None })
}

/// [`mobius_reciprocity`] plus the linearization obstruction, which is
/// left empty for near-parabolic maps.
pub fn mobius_diagnostics(f: &CircleMap, samples: usize) -> Result<MobiusDiagnostics, DynamicsError> {
    let mut d = mobius_reciprocity(f)?;
    d.linearization_obstruction = match linearization_obstruction(f, samples) {
        Ok(v) => Some(v),
        Err(DynamicsError::Parabolic(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(d)
}

/// Koenigs coordinate at the fixed point `c` with multiplier `lambda`,
/// `lim lambda^-n (F^n(x) - c)`, with one Richardson step per iterate.
fn koenigs(f: &CircleMap, c: f64, lambda: f64, x: f64) -> f64 {
    let mut y = x;
    let mut scale = 1.0;
    let mut prev_e = wrap_pi(x - c);
    let mut prev_r: Option<f64> = None;
    let mut r = prev_e;
    for _ in 0..KOENIGS_MAX_STEPS {
        y = f.eval(y);
        scale /= lambda;
        let d = wrap_pi(y - c);
        let e = d * scale;
        r = (e - lambda * prev_e) / (1.0 - lambda);
        if let Some(p) = prev_r {
            if (r - p).abs() <= KOENIGS_REL_TOL * r.abs() {
                break;
            }
        }
        if d.abs() < KOENIGS_MIN_DISPLACEMENT {
            break;
        }
        prev_e = e;
        prev_r = Some(r);
    }
    r
}

/// Deviation of the map from a Möbius transformation, measured through
/// its two Koenigs coordinates. For a Möbius map the product of the
/// coordinates at the attracting and repelling fixed points is constant;
/// the result is the relative sup deviation of that product over one
/// fundamental domain on each arc between the fixed points.
pub fn linearization_obstruction(f: &CircleMap, samples: usize) -> Result<f64, DynamicsError> {
    if samples == 0 {
        return Err(DynamicsError::InvalidInput("sample count must be positive".into()));
    }
    let diag = mobius_reciprocity(f)?;
    let (c1, c2) = (diag.fixed_points[0], diag.fixed_points[1]);
    let (l1, l2) = (diag.derivatives[0], diag.derivatives[1]);
    if (l1 - 1.0).abs() < PARABOLIC_BAND || !(l1 > 0.0 && l2 > 0.0) {
        return Err(DynamicsError::Parabolic(l1));
    }
    let (attract, lambda, repel, mu) = if l1 < 1.0 { (c1, l1, c2, l2) } else { (c2, l2, c1, l1) };
    let inv = f.inverse();
    let mut products = Vec::with_capacity(2 * samples);
    for (lo, hi) in [(c1, c2), (c2, c1 + TAU)] {
        let m = 0.5 * (lo + hi);
        let step = wrap_pi(f.eval(m) - m);
        for j in 0..samples {
            let x = m + step * (j as f64 + 0.5) / samples as f64;
            let plus = koenigs(f, attract, lambda, x);
            let minus = koenigs(&inv, repel, 1.0 / mu, x);
            products.push((plus * minus).abs());
        }
    }
    let mean = products.iter().sum::<f64>() / products.len() as f64;
    if !(mean.is_finite() && mean > 0.0) {
        return Err(DynamicsError::NoConvergence("degenerate Koenigs coordinates".into()));
    }
    Ok(products.iter().map(|p| (p / mean - 1.0).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Factor;
    use crate::geometry::{Oval, OvalSpec};
    use std::sync::Arc;

    #[test]
    fn reciprocity_on_circle() {
        let c = Arc::new(Oval::new(OvalSpec::circle(1.0)).unwrap());
        let f = CircleMap::pair(&c, Factor::point(2.0, 0.0), Factor::point(3.0, 0.0)).unwrap();
        let d = mobius_reciprocity(&f).unwrap();
        assert!(d.reciprocity_defect < 1e-9, "{d:?}");
        assert!(d.derivatives.iter().all(|&l| l > 0.0 && l.is_finite()));
        let g = CircleMap::pair(&c, Factor::point(0.0, 0.0), Factor::point(0.5, 0.0)).unwrap();
        assert!(mobius_reciprocity(&g).unwrap().reciprocity_defect < 1e-9);
        let h = CircleMap::pair(&c, Factor::point(2.0, 0.0), Factor::point(0.0, 3.0)).unwrap();
        assert_eq!(mobius_reciprocity(&h).unwrap_err(), DynamicsError::FixedPointCount(0));
    }

    #[test]
    fn ellipse_maps_are_mobius() {
        let e = Arc::new(Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap());
        let f = CircleMap::pair(&e, Factor::point(3.0, 0.0), Factor::point(5.0, 0.0)).unwrap();
        let ob = linearization_obstruction(&f, 16).unwrap();
        assert!(ob < 1e-6, "{ob}");
    }

    #[test]
    fn perturbed_oval_reports_a_value() {
        let o = Arc::new(Oval::new(OvalSpec::fourier(1.0, &[(4, 0.03, 0.0)])).unwrap());
        let f = CircleMap::pair(&o, Factor::point(3.0, 0.0), Factor::point(5.0, 0.0)).unwrap();
        let ob = linearization_obstruction(&f, 16).unwrap();
        assert!(ob.is_finite() && ob >= 0.0);
    }

    #[test]
    fn parabolic_maps_are_refused() {
        let c = Arc::new(Oval::new(OvalSpec::circle(1.0)).unwrap());
        let f = CircleMap::pair(&c, Factor::point(3.0, 0.0), Factor::point(3.00001, 0.0)).unwrap();
        assert!(matches!(linearization_obstruction(&f, 8), Err(DynamicsError::Parabolic(_))));
    }
}
