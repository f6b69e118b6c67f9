use serde::{Deserialize, Serialize};

/// Declarative curve description, as read from a curve-spec JSON file.
///
/// ```
/// use conic_rigidity::geometry::OvalSpec;
/// let s: OvalSpec = serde_json::from_str(r#"{"variant": "ellipse", "A": 2.0, "B": 1.0}"#).unwrap();
/// assert_eq!(s, OvalSpec::Ellipse { a: 2.0, b: 1.0 });
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum OvalSpec {
    /// `(A cos t, B sin t)`.
    Ellipse {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
    /// Support function `h(t) = h0 + sum c cos(k t) + s sin(k t)`; the curve
    /// is `h n + h' n'` with `n = (cos t, sin t)`.
    FourierSupport { h0: f64, harmonics: Vec<(u32, f64, f64)> },
    /// Affinely parameterized arc with `gamma''' = -k(t) gamma'`, `k` given by
    /// ascending polynomial coefficients, normalized at `t = 0`.
    OdeGerm { k_poly: Vec<f64>, t_range: [f64; 2] },
}

impl OvalSpec {
    pub fn circle(r: f64) -> Self {
        OvalSpec::Ellipse { a: r, b: r }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        OvalSpec::Ellipse { a, b }
    }

    pub fn fourier(h0: f64, harmonics: &[(u32, f64, f64)]) -> Self {
        OvalSpec::FourierSupport { h0, harmonics: harmonics.to_vec() }
    }

    pub fn germ(k_poly: &[f64], t_range: [f64; 2]) -> Self {
        OvalSpec::OdeGerm { k_poly: k_poly.to_vec(), t_range }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, OvalSpec::OdeGerm { .. })
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            OvalSpec::Ellipse { a, b } if a == b => format!("circle(r={a})"),
            OvalSpec::Ellipse { a, b } => format!("ellipse(A={a},B={b})"),
            OvalSpec::FourierSupport { h0, harmonics } => {
                let hs: Vec<String> = harmonics.iter().map(|(k, c, s)| format!("{k}:{c}:{s}")).collect();
                format!("fourier(h0={h0};{})", hs.join(","))
            }
            OvalSpec::OdeGerm { k_poly, t_range } => {
                let ks: Vec<String> = k_poly.iter().map(|c| c.to_string()).collect();
                format!("germ(k=[{}];t=[{},{}])", ks.join(","), t_range[0], t_range[1])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let f: OvalSpec = serde_json::from_str(r#"{"variant": "fourier_support", "h0": 1.0, "harmonics": [[3, 0.05, 0.0]]}"#).unwrap();
        assert_eq!(f, OvalSpec::fourier(1.0, &[(3, 0.05, 0.0)]));
        let g: OvalSpec = serde_json::from_str(r#"{"variant": "ode_germ", "k_poly": [1.0, 1.0], "t_range": [-0.5, 0.5]}"#).unwrap();
        assert_eq!(g, OvalSpec::germ(&[1.0, 1.0], [-0.5, 0.5]));
        let back: OvalSpec = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn unknown_fields_and_variants_rejected() {
        assert!(serde_json::from_str::<OvalSpec>(r#"{"variant": "ellipse", "A": 2.0, "B": 1.0, "C": 3}"#).is_err());
        assert!(serde_json::from_str::<OvalSpec>(r#"{"variant": "hyperbola", "A": 2.0}"#).is_err());
    }
}
