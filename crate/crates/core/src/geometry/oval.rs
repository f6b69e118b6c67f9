use std::f64::consts::{FRAC_PI_2, TAU};

use super::primitives::Vec2;
use super::spec::OvalSpec;
use super::GeometryError;

/// Highest derivative order served by [`Oval::eval_jet`].
pub const MAX_JET_ORDER: usize = 6;

const CONVEXITY_SAMPLES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// Parameter circle `[0, 2 pi)`.
    Closed,
    Arc { lo: f64, hi: f64 },
}

#[derive(Clone, Debug)]
enum Shape {
    Ellipse { a: f64, b: f64 },
    Fourier { h0: f64, harmonics: Vec<(f64, f64, f64)> },
    Germ(TaylorGerm),
}

/// A validated strictly convex curve with analytic jets.
#[derive(Clone, Debug)]
pub struct Oval {
    spec: OvalSpec,
    shape: Shape,
    scale: f64,
}

impl Oval {
    pub fn new(spec: OvalSpec) -> Result<Self, GeometryError> {
        let invalid = |m: String| Err(GeometryError::InvalidSpec(m));
        let shape = match &spec {
            OvalSpec::Ellipse { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0) {
                    return invalid(format!("ellipse semi-axes must be positive, got A={a}, B={b}"));
                }
                Shape::Ellipse { a: *a, b: *b }
            }
            OvalSpec::FourierSupport { h0, harmonics } => {
                if !h0.is_finite() || harmonics.iter().any(|(k, c, s)| *k == 0 || !c.is_finite() || !s.is_finite()) {
                    return invalid("fourier_support needs finite coefficients and harmonics k >= 1".into());
                }
                let harmonics: Vec<(f64, f64, f64)> = harmonics.iter().map(|&(k, c, s)| (k as f64, c, s)).collect();
                // det(g', g'') = rho^2 cannot see the sign of rho = h + h''
                for i in 0..CONVEXITY_SAMPLES {
                    let t = TAU * i as f64 / CONVEXITY_SAMPLES as f64;
                    let rho = support_derivative(*h0, &harmonics, t, 0) + support_derivative(*h0, &harmonics, t, 2);
                    if !(rho > 0.0) {
                        return invalid(format!("h + h'' = {rho:.3e} <= 0 at t = {t:.6}"));
                    }
                }
                Shape::Fourier { h0: *h0, harmonics }
            }
            OvalSpec::OdeGerm { k_poly, t_range } => {
                let [lo, hi] = *t_range;
                if k_poly.is_empty() || k_poly.iter().any(|c| !c.is_finite()) {
                    return invalid("ode_germ needs a nonempty finite k_poly".into());
                }
                if !(lo <= 0.0 && 0.0 <= hi && lo < hi && hi - lo <= 64.0) {
                    return invalid(format!("ode_germ t_range must contain 0 and have length <= 64, got [{lo}, {hi}]"));
                }
                Shape::Germ(TaylorGerm::integrate(k_poly, lo, hi))
            }
        };
        let mut oval = Oval { spec, shape, scale: 1.0 };
        let samples = oval.sample_params(CONVEXITY_SAMPLES);
        let mut scale = 1f64;
        for &t in &samples {
            let [p, d1, d2] = oval.jet::<3>(t);
            if !(d1.cross(d2) > 0.0) {
                return invalid(format!("curve is not strictly convex near t = {t:.6}"));
            }
            scale = scale.max(p.norm());
        }
        oval.scale = scale;
        Ok(oval)
    }

    pub fn spec(&self) -> &OvalSpec {
        &self.spec
    }

    pub fn domain(&self) -> Domain {
        match &self.shape {
            Shape::Germ(g) => Domain::Arc { lo: g.lo, hi: g.hi },
            _ => Domain::Closed,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.domain() == Domain::Closed
    }

    /// Larger of 1 and the largest sampled `|gamma(t)|`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `n` equispaced parameters: `[0, 2 pi)` for closed curves, both
    /// endpoints included for arcs.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        match self.domain() {
            Domain::Closed => (0..n).map(|i| TAU * i as f64 / n as f64).collect(),
            Domain::Arc { lo, hi } => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect(),
        }
    }

    pub fn check_param(&self, t: f64) -> Result<(), GeometryError> {
        if !t.is_finite() {
            return Err(GeometryError::OutOfRange { t, lo: f64::NAN, hi: f64::NAN });
        }
        if let Domain::Arc { lo, hi } = self.domain() {
            let slack = 1e-12 * (hi - lo);
            if t < lo - slack || t > hi + slack {
                return Err(GeometryError::OutOfRange { t, lo, hi });
            }
        }
        Ok(())
    }

    /// `gamma, gamma', ..., gamma^(order)` at `t`.
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<Vec<Vec2>, GeometryError> {
        self.check_param(t)?;
        if order > MAX_JET_ORDER {
            return Err(GeometryError::Degenerate(format!("jet order {order} exceeds {MAX_JET_ORDER}")));
        }
        let full = self.jet::<{ MAX_JET_ORDER + 1 }>(t);
        Ok(full[..=order].to_vec())
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.jet::<1>(t)[0]
    }

    pub fn tangent(&self, t: f64) -> Vec2 {
        self.jet::<2>(t)[1]
    }

    /// Unchecked jet of length `N` (orders `0..N`).
    pub(crate) fn jet<const N: usize>(&self, t: f64) -> [Vec2; N] {
        let mut out = [Vec2::ZERO; N];
        match &self.shape {
            Shape::Ellipse { a, b } => {
                for (m, slot) in out.iter_mut().enumerate() {
                    let (s, c) = (t + m as f64 * FRAC_PI_2).sin_cos();
                    *slot = Vec2::new(a * c, b * s);
                }
            }
            Shape::Fourier { h0, harmonics } => fourier_jet(*h0, harmonics, t, &mut out),
            Shape::Germ(g) => g.jet(t, &mut out),
        }
        out
    }
}

/// `h^(m)(t)` for the support function.
fn support_derivative(h0: f64, harmonics: &[(f64, f64, f64)], t: f64, m: usize) -> f64 {
    let mut v = if m == 0 { h0 } else { 0.0 };
    for &(k, c, s) in harmonics {
        let phase = k * t + m as f64 * FRAC_PI_2;
        let (sn, cs) = phase.sin_cos();
        v += k.powi(m as i32) * (c * cs + s * sn);
    }
    v
}

fn fourier_jet(h0: f64, harmonics: &[(f64, f64, f64)], t: f64, out: &mut [Vec2]) {
    let n = Vec2::from_angle(t);
    let np = n.perp();
    if out.is_empty() {
        return;
    }
    out[0] = n * support_derivative(h0, harmonics, t, 0) + np * support_derivative(h0, harmonics, t, 1);
    // gamma' = rho n', rho = h + h''; Leibniz for the rest
    let rho: Vec<f64> = (0..out.len().saturating_sub(1))
        .map(|j| support_derivative(h0, harmonics, t, j) + support_derivative(h0, harmonics, t, j + 2))
        .collect();
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = Vec2::ZERO;
        let mut binom = 1.0;
        for (j, r) in rho.iter().enumerate().take(m) {
            let dir = Vec2::from_angle(t + (m - j) as f64 * FRAC_PI_2);
            acc = acc + dir * (binom * r);
            binom = binom * (m - 1 - j) as f64 / (j + 1) as f64;
        }
        *slot = acc;
    }
}

const TAYLOR_TERMS: usize = 30;
const TAYLOR_TOL: f64 = 1e-17;
const MAX_STEP: f64 = 0.5;

#[derive(Clone, Debug)]
struct Node {
    t: f64,
    coeffs: [Vec2; TAYLOR_TERMS],
}

/// Piecewise Taylor-series solution of `gamma''' = -k(t) gamma'` with
/// `gamma(0) = (0,0)`, `gamma'(0) = (1,0)`, `gamma''(0) = (0,1)`.
#[derive(Clone, Debug)]
struct TaylorGerm {
    k: Vec<f64>,
    lo: f64,
    hi: f64,
    /// Sorted by `t`.
    nodes: Vec<Node>,
}

impl TaylorGerm {
    fn integrate(k: &[f64], lo: f64, hi: f64) -> Self {
        let mut g = TaylorGerm { k: k.to_vec(), lo, hi, nodes: Vec::new() };
        let start = [Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let mut forward = g.march(start, 1.0);
        let mut backward = g.march(start, -1.0);
        backward.reverse();
        backward.pop();
        backward.append(&mut forward);
        g.nodes = backward;
        g
    }

    /// Nodes from `t = 0` to the end of the range in direction `dir`.
    fn march(&self, mut state: [Vec2; 3], dir: f64) -> Vec<Node> {
        let end = if dir > 0.0 { self.hi } else { self.lo };
        let mut t = 0.0;
        let mut out = Vec::new();
        loop {
            let coeffs = self.series(t, &state);
            out.push(Node { t, coeffs });
            if (end - t) * dir <= 0.0 {
                break;
            }
            let size = coeffs.iter().take(3).map(|c| c.norm()).fold(1.0, f64::max);
            let mut h = MAX_STEP;
            for n in [TAYLOR_TERMS - 2, TAYLOR_TERMS - 1] {
                let c = coeffs[n].norm();
                if c > 0.0 {
                    h = h.min((TAYLOR_TOL * size / c).powf(1.0 / n as f64));
                }
            }
            // land exactly on the end point
            let h = h.min((end - t).abs());
            let s = h * dir;
            let mut next = [Vec2::ZERO; 3];
            eval_series(&coeffs, s, &mut next);
            state = next;
            t += s;
            if (end - t).abs() <= 1e-15 * (1.0 + end.abs()) {
                t = end;
            }
        }
        out
    }

    /// Taylor coefficients at `t0` from `(gamma, gamma', gamma'')`.
    fn series(&self, t0: f64, state: &[Vec2; 3]) -> [Vec2; TAYLOR_TERMS] {
        let kappa = shifted_poly(&self.k, t0);
        let mut c = [Vec2::ZERO; TAYLOR_TERMS];
        c[0] = state[0];
        c[1] = state[1];
        c[2] = state[2] * 0.5;
        for n in 0..TAYLOR_TERMS - 3 {
            let mut s = Vec2::ZERO;
            for (j, kj) in kappa.iter().enumerate().take(n + 1) {
                s = s + c[n - j + 1] * (kj * (n - j + 1) as f64);
            }
            c[n + 3] = s * (-1.0 / ((n + 3) * (n + 2) * (n + 1)) as f64);
        }
        c
    }

    fn jet(&self, t: f64, out: &mut [Vec2]) {
        let i = self.nodes.partition_point(|n| n.t < t);
        let node = match (i.checked_sub(1).map(|j| &self.nodes[j]), self.nodes.get(i)) {
            (Some(a), Some(b)) => {
                if t - a.t <= b.t - t {
                    a
                } else {
                    b
                }
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("germ has at least one node"),
        };
        eval_series(&node.coeffs, t - node.t, out);
    }
}

/// Derivatives of `sum c_n s^n` at `s`, orders `0..out.len()`.
fn eval_series(c: &[Vec2], s: f64, out: &mut [Vec2]) {
    for (m, slot) in out.iter_mut().enumerate() {
        let mut acc = Vec2::ZERO;
        for n in (m..c.len()).rev() {
            let falling = (n - m + 1..=n).fold(1.0, |f, i| f * i as f64);
            acc = acc * s + c[n] * falling;
        }
        *slot = acc;
    }
}

/// Taylor coefficients of the polynomial `k` about `t0`.
fn shifted_poly(k: &[f64], t0: f64) -> Vec<f64> {
    let mut c = k.to_vec();
    // repeated synthetic division by (t - t0)
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] += t0 * c[j + 1];
        }
    }
    c
}
