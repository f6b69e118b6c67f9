use serde::Serialize;

use crate::geometry::{
    line_join, line_meet, support_params, tangents_from_point, visible_arc, Meet, Oval, PlanePoint, ProjLine, Vec2,
};

use super::ExperimentError;

/// One run of the pole-polar incidence construction.
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceRecord {
    pub curve: String,
    pub a: PlanePoint,
    /// Position of `B` along the visible arc of `A`, in `(-1, 1)`.
    pub selector: f64,
    /// `B`, or `None` when it lies at infinity.
    pub b: Option<PlanePoint>,
    /// Direction of `B` when it lies at infinity.
    pub b_direction: Option<Vec2>,
    pub tangency_a: (f64, f64),
    pub tangency_b: (f64, f64),
    /// `dist(A, b) / |chord a|`.
    pub defect: f64,
}

/// Builds `a` = chord of contact of `A`, picks `B` on `a` where the tangent
/// at `gamma(t_mid + s * half)` crosses it, builds `b` = chord of contact of
/// `B` and measures how far `b` misses `A`.
pub fn incidence_defect(oval: &Oval, a: PlanePoint, s: f64) -> Result<IncidenceRecord, ExperimentError> {
    if !(s > -1.0 && s < 1.0) {
        return Err(ExperimentError::InvalidInput(format!("B selector must lie in (-1, 1), got {s}")));
    }
    let (t1, t2) = tangents_from_point(oval, a)?;
    let (e1, e2) = (oval.point(t1), oval.point(t2));
    let line_a = line_join(e1, e2)?;
    let (start, end) = visible_arc(oval, a, t1, t2);
    let tau = 0.5 * (start + end) + s * 0.5 * (end - start);
    let [g, d] = oval.jet::<2>(tau);
    let tangent = ProjLine::through(g, d);
    let (b, b_direction, (u1, u2)) = match line_meet(&line_a, &tangent)? {
        Meet::Point(p) => (Some(p), None, tangents_from_point(oval, p)?),
        Meet::AtInfinity(dir) => (None, Some(dir), support_params(oval, dir)?),
    };
    let line_b = line_join(oval.point(u1), oval.point(u2))?;
    Ok(IncidenceRecord {
        curve: oval.spec().label(),
        a,
        selector: s,
        b,
        b_direction,
        tangency_a: (t1, t2),
        tangency_b: (u1, u2),
        defect: line_b.distance(a) / (e2 - e1).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OvalSpec;

    #[test]
    fn conics_preserve_incidence() {
        let c = Oval::new(OvalSpec::circle(1.0)).unwrap();
        let r = incidence_defect(&c, Vec2::new(2.0, 0.0), 0.4).unwrap();
        assert!(r.defect <= 1e-12, "{r:?}");
        let r = incidence_defect(&c, Vec2::new(2.0, 0.0), 0.0).unwrap();
        assert!(r.b.is_none() && r.defect <= 1e-12, "{r:?}");
        let e = Oval::new(OvalSpec::ellipse(2.0, 1.0)).unwrap();
        for s in [-0.9, -0.3, 0.2, 0.7] {
            let r = incidence_defect(&e, Vec2::new(2.2, 0.1), s).unwrap();
            assert!(r.defect <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn non_conic_germ_misses() {
        let g = Oval::new(OvalSpec::germ(&[1.0, 1.0], [-1.0, 1.0])).unwrap();
        // a point above the tangent at 0, seeing the arc around the origin
        let r = incidence_defect(&g, Vec2::new(0.0, -0.02), 0.3).unwrap();
        assert!(r.defect > 1e-9, "{r:?}");
    }

    #[test]
    fn selector_is_checked() {
        let c = Oval::new(OvalSpec::circle(1.0)).unwrap();
        assert!(incidence_defect(&c, Vec2::new(2.0, 0.0), 1.0).is_err());
        assert!(incidence_defect(&c, Vec2::new(0.5, 0.0), 0.0).is_err());
    }
}
