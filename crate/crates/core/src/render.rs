//! Static SVG drawings of the constructions.

use std::fmt::Write;
use std::sync::Arc;

use crate::dynamics::{fixed_points, CircleMap, Factor};
use crate::experiments::{incidence_defect, parallelogram_test, ExperimentError};
use crate::geometry::{Oval, PlanePoint, Vec2};

const CURVE_SAMPLES: usize = 512;
const MARGIN: f64 = 0.25;

/// Accumulates primitives in model coordinates and writes them with the
/// y axis pointing up.
struct Canvas {
    body: String,
    lo: Vec2,
    hi: Vec2,
}

fn n(x: f64) -> String {
    format!("{x:.6}")
}

impl Canvas {
    fn new() -> Self {
        Canvas { body: String::new(), lo: Vec2::new(f64::INFINITY, f64::INFINITY), hi: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn include(&mut self, p: PlanePoint) {
        self.lo = Vec2::new(self.lo.x.min(p.x), self.lo.y.min(p.y));
        self.hi = Vec2::new(self.hi.x.max(p.x), self.hi.y.max(p.y));
    }

    fn polyline(&mut self, class: &str, pts: &[PlanePoint], closed: bool) {
        let tag = if closed { "polygon" } else { "polyline" };
        let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", n(p.x), n(p.y))).collect();
        pts.iter().for_each(|&p| self.include(p));
        let _ = writeln!(self.body, "<{tag} class=\"{class}\" points=\"{}\"/>", coords.join(" "));
    }

    fn segment(&mut self, class: &str, a: PlanePoint, b: PlanePoint) {
        self.include(a);
        self.include(b);
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            n(a.x),
            n(a.y),
            n(b.x),
            n(b.y)
        );
    }

    fn point(&mut self, class: &str, p: PlanePoint) {
        self.include(p);
        let _ = writeln!(self.body, "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"0.03\"/>", n(p.x), n(p.y));
    }

    fn curve(&mut self, oval: &Oval) {
        let pts: Vec<PlanePoint> = oval.sample_params(CURVE_SAMPLES).into_iter().map(|t| oval.point(t)).collect();
        self.polyline("curve", &pts, oval.is_closed());
    }

    fn finish(self, title: &str) -> String {
        let (lo, hi) = (self.lo - Vec2::new(MARGIN, MARGIN), self.hi + Vec2::new(MARGIN, MARGIN));
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
            n(lo.x),
            n(-hi.y),
            n(w),
            n(h),
            (400.0 * w / h.max(w)).round(),
            (400.0 * h / h.max(w)).round()
        );
        let _ = writeln!(out, "<title>{title}</title>");
        out.push_str(
            "<style>*{fill:none;stroke-width:0.01} .curve{stroke:#000;stroke-width:0.015} \
             .tangent{stroke:#888} .chord-a{stroke:#c00} .chord-b{stroke:#06c} .pencil{stroke:#888} \
             .parallelogram{stroke:#393} circle{fill:#000} circle.fixed-point{fill:#c00}</style>\n",
        );
        out.push_str("<g transform=\"scale(1,-1)\">\n");
        out.push_str(&self.body);
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// `A`, its tangents and chord of contact `a`, a point `B` on `a` and
/// the chord of contact `b` of `B`.
pub fn render_duality(oval: &Oval, a: PlanePoint, selector: f64) -> Result<String, ExperimentError> {
    let rec = incidence_defect(oval, a, selector)?;
    let mut c = Canvas::new();
    c.curve(oval);
    let (t1, t2) = rec.tangency_a;
    let (e1, e2) = (oval.point(t1), oval.point(t2));
    c.segment("tangent", a, e1);
    c.segment("tangent", a, e2);
    c.segment("chord-a", e1, e2);
    c.point("pole", a);
    let (u1, u2) = rec.tangency_b;
    let (f1, f2) = (oval.point(u1), oval.point(u2));
    if let Some(b) = rec.b {
        c.segment("tangent", b, f1);
        c.segment("tangent", b, f2);
        c.point("pole", b);
    }
    c.segment("chord-b", f1, f2);
    Ok(c.finish(&format!("duality: defect {:.3e}", rec.defect)))
}

/// The inscribed parallelograms of [`parallelogram_test`].
pub fn render_parallelograms(oval: &Arc<Oval>, u: Vec2, count: usize) -> Result<String, ExperimentError> {
    let rep = parallelogram_test(oval, u, count)?;
    let mut c = Canvas::new();
    c.curve(oval);
    for p in &rep.parallelograms {
        c.polyline("parallelogram", p, true);
    }
    Ok(c.finish(&format!("{} inscribed parallelograms", rep.parallelograms.len())))
}

/// The line `PQ` and the fixed points of `f_P o f_Q`.
pub fn render_fixed_points(oval: &Arc<Oval>, p: PlanePoint, q: PlanePoint) -> Result<String, ExperimentError> {
    let f = CircleMap::pair(oval, Factor::Pencil { p }, Factor::Pencil { p: q })?;
    let fixed = fixed_points(&f);
    let mut c = Canvas::new();
    c.curve(oval);
    let d = q - p;
    c.segment("pencil", p - d * 0.5, q + d * 0.5);
    c.point("pole", p);
    c.point("pole", q);
    for &t in &fixed {
        c.point("fixed-point", oval.point(t));
    }
    Ok(c.finish(&format!("{} fixed points", fixed.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OvalSpec;

    #[test]
    fn duality_drawing_has_polar_line() {
        let c = Oval::new(OvalSpec::circle(1.0)).unwrap();
        let svg = render_duality(&c, Vec2::new(2.0, 0.0), 0.4).unwrap();
        assert!(svg.contains("class=\"chord-a\" x1=\"0.500000\""), "{svg}");
        assert!(svg.contains("x2=\"0.500000\""));
        assert_eq!(svg, render_duality(&c, Vec2::new(2.0, 0.0), 0.4).unwrap());
    }

    #[test]
    fn parallelogram_drawing_counts() {
        let e = Arc::new(Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap());
        let svg = render_parallelograms(&e, Vec2::new(1.0, 1.0), 5).unwrap();
        assert_eq!(svg.matches("class=\"parallelogram\"").count(), 5);
    }

    #[test]
    fn fixed_point_drawing_marks_two() {
        let e = Arc::new(Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap());
        let svg = render_fixed_points(&e, Vec2::new(3.0, 0.0), Vec2::new(5.0, 0.5)).unwrap();
        assert_eq!(svg.matches("class=\"fixed-point\"").count(), 2);
    }
}
