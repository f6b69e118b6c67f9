use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::ParamPoly;
use crate::geometry::roots::newton_bracketed;
use crate::geometry::{line_meet, Meet, Oval, OvalSpec, PlanePoint, ProjLine};
use crate::symbolic::{closed_forms, involution_defect, solve_duality_expansion, KSign};

use super::ExperimentError;

/// Measured and predicted `eps^3` coefficient of `f(f(a)) - a`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub a: f64,
    /// `k'(0)`.
    pub p: f64,
    /// `k''(0)`.
    pub q: f64,
    pub epsilons: Vec<f64>,
    /// `(f(f(a)) - a) / eps^3` per epsilon.
    pub measured: Vec<f64>,
    /// Polynomial extrapolation of `measured` to `eps = 0`.
    pub extrapolated: f64,
    /// Exact coefficient from the symbolic solver at `(a, p)`.
    pub predicted: f64,
    /// The reference closed form, when `k(0) = 1`.
    pub reference: Option<f64>,
    /// `|extrapolated - predicted| / |predicted|`, or the absolute value
    /// when the prediction vanishes.
    pub relative_error: f64,
}

fn solved_defect(sign: KSign) -> Result<&'static ParamPoly, ExperimentError> {
    static PLUS: OnceLock<Result<ParamPoly, String>> = OnceLock::new();
    static MINUS: OnceLock<Result<ParamPoly, String>> = OnceLock::new();
    let cell = match sign {
        KSign::Plus => &PLUS,
        KSign::Minus => &MINUS,
    };
    cell.get_or_init(|| {
        solve_duality_expansion(sign)
            .and_then(|e| involution_defect(&e))
            .map(|d| d.coefficient)
            .map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| ExperimentError::Internal(e.clone()))
}

/// Exact `eps^3` coefficient of `f(f(a)) - a` for `k(0) = +-1`.
pub fn predicted_defect(sign: KSign, a: f64, p: f64, q: f64) -> Result<f64, ExperimentError> {
    Ok(solved_defect(sign)?.eval_f64(a, &[p, q]))
}

/// One step of the four-point construction: tangents at `gamma(a eps)` and
/// `gamma(eps)` meet at `P`; the line through `P` and `gamma(-eps)` meets
/// the curve again at `gamma(-b eps)`. Returns `b`.
fn chord_map(oval: &Oval, a: f64, eps: f64) -> Result<f64, ExperimentError> {
    let tangent = |t: f64| {
        let [g, d] = oval.jet::<2>(t);
        ProjLine::through(g, d)
    };
    let p: PlanePoint = match line_meet(&tangent(a * eps), &tangent(eps))? {
        Meet::Point(p) => p,
        Meet::AtInfinity(_) => return Err(ExperimentError::Internal("tangents are parallel".into())),
    };
    let base = oval.point(-eps) - p;
    let g = |s: f64| {
        let [gs, ds] = oval.jet::<2>(s);
        ((gs - p).cross(base), ds.cross(base))
    };
    // the second intersection lies on the arc between gamma(a eps) and gamma(eps)
    let (lo, hi) = (a * eps, eps);
    if (g(lo).0 > 0.0) == (g(hi).0 > 0.0) {
        return Err(ExperimentError::Internal(format!("no sign change for a = {a}, eps = {eps}")));
    }
    let s = newton_bracketed(g, lo, hi, 0.5 * (lo + hi), 1e-16);
    Ok(-s / eps)
}

/// Value at 0 of the polynomial through `(x_i, y_i)` (Neville).
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Realizes the chord map `a -> b` on an `ode_germ` curve for each
/// epsilon, composes it with itself and fits the `eps^3` coefficient of
/// `f(f(a)) - a`.
pub fn epsilon_scaling_fit(germ: &OvalSpec, a: f64, epsilons: &[f64]) -> Result<ScalingFit, ExperimentError> {
    let OvalSpec::OdeGerm { k_poly, t_range } = germ else {
        return Err(ExperimentError::InvalidInput(format!("scaling fit needs an ode_germ, got {}", germ.label())));
    };
    if !(a > -1.0 && a < 1.0) {
        return Err(ExperimentError::InvalidInput(format!("a must lie in (-1, 1), got {a}")));
    }
    if epsilons.len() < 3 || epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(ExperimentError::InvalidInput("epsilons must be positive, strictly decreasing, at least 3".into()));
    }
    let reach = epsilons[0];
    if -reach < t_range[0] || reach > t_range[1] {
        return Err(ExperimentError::InvalidInput(format!(
            "eps = {reach} leaves the germ range [{}, {}]",
            t_range[0], t_range[1]
        )));
    }
    let k0 = k_poly[0];
    let sign = KSign::from_i64(k0 as i64)
        .filter(|_| k0.fract() == 0.0)
        .ok_or_else(|| ExperimentError::InvalidInput(format!("germ needs k(0) = +1 or -1, got {k0}")))?;
    let p = k_poly.get(1).copied().unwrap_or(0.0);
    let q = 2.0 * k_poly.get(2).copied().unwrap_or(0.0);
    let oval = Oval::new(germ.clone())?;
    let measured = epsilons
        .iter()
        .map(|&eps| {
            let b = chord_map(&oval, a, eps)?;
            let ffa = chord_map(&oval, b, eps)?;
            Ok((ffa - a) / eps.powi(3))
        })
        .collect::<Result<Vec<f64>, ExperimentError>>()?;
    let extrapolated = extrapolate_to_zero(epsilons, &measured);
    let predicted = predicted_defect(sign, a, p, q)?;
    let reference = (sign == KSign::Plus).then(|| closed_forms::involution_defect().eval_f64(a, &[p, q]));
    let relative_error = if predicted == 0.0 {
        extrapolated.abs()
    } else {
        ((extrapolated - predicted) / predicted).abs()
    };
    Ok(ScalingFit {
        a,
        p,
        q,
        epsilons: epsilons.to_vec(),
        measured,
        extrapolated,
        predicted,
        reference,
        relative_error,
    })
}
