//! Canonical text and JSON certificate for a solved expansion, with golden
//! comparison.

use serde::Serialize;

use super::closed_forms;
use super::jet::KSign;
use super::solver::{involution_defect, solve_to_order, SolveError, DEFAULT_CONDITION_ORDER};

/// Reference closed forms for `k = +1`, in canonical text.
pub const GOLDEN_REFERENCE_PLUS: &str = include_str!("../../golden/series_plus_reference.txt");
/// Solver output for `k = -1`, recorded after the numeric cross-check.
pub const GOLDEN_SOLVER_MINUS: &str = include_str!("../../golden/series_minus.txt");

#[derive(Clone, Debug, Serialize)]
pub struct GoldenCheck {
    pub source: &'static str,
    pub matches: bool,
    /// Names of the lines that differ.
    pub mismatched: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub k_sign: &'static str,
    pub condition_order: usize,
    /// `("b0", "-(3*a+1)/(a+3)")`, ...
    pub coefficients: Vec<(String, String)>,
    pub defect_order: usize,
    pub defect: String,
    /// `eps^k` residual is identically zero, for `k = 4..=order`.
    pub residual_zero: Vec<(usize, bool)>,
    pub golden: Option<GoldenCheck>,
}

impl SeriesReport {
    pub fn certified(&self) -> bool {
        self.residual_zero.iter().all(|(_, z)| *z)
    }

    /// Certified and, when a golden file applies, matching it.
    pub fn passed(&self) -> bool {
        self.certified() && self.golden.as_ref().is_none_or(|g| g.matches)
    }

    /// One `name = value` line per coefficient and a final defect line.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (name, value) in &self.coefficients {
            out.push_str(&format!("{name} = {value}\n"));
        }
        out.push_str(&format!("ffa_minus_a_eps{} = {}\n", self.defect_order, self.defect));
        out
    }

    pub fn certificate_json(&self) -> serde_json::Value {
        let residual: serde_json::Map<String, serde_json::Value> = self
            .residual_zero
            .iter()
            .map(|(k, z)| (format!("eps{k}"), serde_json::Value::Bool(*z)))
            .collect();
        serde_json::json!({
            "k_sign": self.k_sign,
            "condition_order": self.condition_order,
            "coefficients": self.coefficients.iter().map(|(n, v)| serde_json::json!({"name": n, "value": v})).collect::<Vec<_>>(),
            "involution_defect": {"order": self.defect_order, "value": self.defect},
            "residual_zero": residual,
            "certified": self.certified(),
            "golden": self.golden,
        })
    }
}

/// Canonical text of the reference `k = +1` formulas.
pub fn reference_canonical_text() -> String {
    let mut out = String::new();
    for (i, b) in closed_forms::expansion().iter().enumerate() {
        out.push_str(&format!("b{i} = {b}\n"));
    }
    out.push_str(&format!("ffa_minus_a_eps3 = {}\n", closed_forms::involution_defect()));
    out
}

fn compare(text: &str, golden: &str, source: &'static str) -> GoldenCheck {
    let parse = |s: &str| -> Vec<(String, String)> {
        s.lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(n, v)| (n.trim().to_string(), v.trim().to_string()))
            .collect()
    };
    let got = parse(text);
    let want = parse(golden);
    let mut mismatched: Vec<String> = want
        .iter()
        .filter(|(n, v)| got.iter().find(|(m, _)| m == n).is_none_or(|(_, w)| w != v))
        .map(|(n, _)| n.clone())
        .collect();
    for (n, _) in &got {
        if !want.iter().any(|(m, _)| m == n) {
            mismatched.push(n.clone());
        }
    }
    GoldenCheck { source, matches: mismatched.is_empty(), mismatched }
}

/// Solves, composes and compares. Golden files exist only for the default
/// order; other orders are certificate-only.
pub fn verify_series(k_sign: KSign, order: usize) -> Result<SeriesReport, SolveError> {
    let exp = solve_to_order(k_sign, order)?;
    let defect = involution_defect(&exp)?;
    let coefficients = exp.b.iter().enumerate().map(|(i, b)| (format!("b{i}"), b.to_string())).collect();
    let mut report = SeriesReport {
        k_sign: k_sign.label(),
        condition_order: order,
        coefficients,
        defect_order: defect.order,
        defect: defect.coefficient.to_string(),
        residual_zero: exp.residual_zero.clone(),
        golden: None,
    };
    if order == DEFAULT_CONDITION_ORDER {
        let text = report.canonical_text();
        report.golden = Some(match k_sign {
            KSign::Plus => compare(&text, GOLDEN_REFERENCE_PLUS, "reference"),
            KSign::Minus => compare(&text, GOLDEN_SOLVER_MINUS, "solver"),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_golden_file_is_the_closed_forms() {
        assert_eq!(GOLDEN_REFERENCE_PLUS, reference_canonical_text());
    }

    #[test]
    fn compare_reports_each_differing_line() {
        let g = compare("b0 = 1\nb1 = 2\n", "b0 = 1\nb1 = 3\n", "t");
        assert!(!g.matches);
        assert_eq!(g.mismatched, vec!["b1".to_string()]);
        assert!(compare("x = 1\n", "x = 1\n", "t").matches);
    }

    #[test]
    fn minus_case_matches_recorded_output() {
        let r = verify_series(KSign::Minus, DEFAULT_CONDITION_ORDER).unwrap();
        assert!(r.certified());
        assert!(r.golden.as_ref().unwrap().matches, "{}", r.canonical_text());
    }

    #[test]
    fn plus_case_differs_from_print_only_in_sign_of_higher_terms() {
        let r = verify_series(KSign::Plus, DEFAULT_CONDITION_ORDER).unwrap();
        assert!(r.certified());
        let g = r.golden.unwrap();
        assert_eq!(g.mismatched, vec!["b2", "b3", "ffa_minus_a_eps3"]);
    }

    #[test]
    fn extended_order_has_no_golden() {
        let r = verify_series(KSign::Plus, 8).unwrap();
        assert!(r.golden.is_none());
        assert!(r.certified());
        assert_eq!(r.coefficients.len(), 5);
    }
}
