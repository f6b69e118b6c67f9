use std::fs;
use std::process::{Command, Output};

const ELLIPSE: &str = r#"{"variant": "ellipse", "A": 2, "B": 1}"#;
const CIRCLE: &str = r#"{"variant": "ellipse", "A": 1, "B": 1}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conic-rigidity")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_series_minus_matches_golden() {
    let o = run(&["verify-series", "--k-sign", "-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let golden = include_str!("../golden/series_minus.txt");
    for line in golden.lines().filter(|l| l.contains(" = ")) {
        assert!(stdout(&o).contains(line), "missing {line}");
    }
}

#[test]
fn verify_series_plus_reports_mismatch() {
    let o = run(&["verify-series", "--k-sign", "+1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], true);
    assert_eq!(v["passed"], false);
    assert_eq!(v["golden"]["matches"], false);
}

#[test]
fn rotation_number_of_quarter_turn() {
    let o = run(&["rotation-number", "--curve", CIRCLE, "--dirs", "0", "0.7853981634"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 0.25).abs() <= 1e-6, "{text}");
    assert!(text.contains("± 1.0e-6"));
}

#[test]
fn mobius_json_has_reciprocity_defect() {
    let o = run(&["mobius", "--curve", ELLIPSE, "--P", "3", "0", "--Q", "5", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["reciprocity_defect"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 2);
}

#[test]
fn curve_from_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("ellipse.json");
    fs::write(&curve, ELLIPSE).unwrap();
    let out = dir.path().join("k.json");
    let o = run(&["curvature", "--curve", curve.to_str().unwrap(), "--samples", "8", "--format", "json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.len(), 8);
    let k = 2f64.powf(-2.0 / 3.0);
    for s in &v {
        assert!((s["k"].as_f64().unwrap() - k).abs() <= 1e-8 * k);
    }
}

#[test]
fn scan_sixteen_directions_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let args = ["scan", "--curve", ELLIPSE, "--n", "16", "--iterations", "2000", "-o", csv.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = fs::read(&csv).unwrap();
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 257);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("scan.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["rows"], 256);
    assert_eq!(manifest["family"]["mode"], "direction-pairs");
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(fs::read(&csv).unwrap(), first);
}

#[test]
fn render_writes_svg() {
    let o = run(&["render", "--curve", ELLIPSE, "--kind", "parallelograms", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"parallelogram\"").count(), 3);
}

#[test]
fn user_errors_exit_one() {
    for args in [
        vec!["curvature", "--curve", r#"{"variant": "ellipse", "A": 0, "B": 1}"#],
        vec!["curvature", "--curve", "/no/such/file.json"],
        vec!["incidence", "--curve", ELLIPSE, "--A", "0.1", "0"],
        vec!["parallelogram", "--curve", r#"{"variant": "fourier_support", "h0": 1, "harmonics": [[3, 0.05, 0]]}"#],
        vec!["rotation-number", "--curve", ELLIPSE],
        vec!["scan", "--bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
