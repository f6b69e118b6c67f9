use std::ffi::{CStr, CString};
use std::ptr;

use conic_rigidity_ffi::*;

fn oval(spec: &str) -> *mut CrOval {
    let spec = CString::new(spec).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cr_oval_from_json(spec.as_ptr(), &mut out) }, CrStatus::Ok);
    out
}

fn last_error() -> String {
    let p = cr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn pencil_pair_on_ellipse() {
    let e = oval(r#"{"variant": "ellipse", "A": 2, "B": 1}"#);
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { cr_map_pencil_pair(e, 3.0, 0.0, 5.0, 0.5, &mut map) }, CrStatus::Ok);
    let mut buf = [0.0; 4];
    let mut count = 0;
    assert_eq!(unsafe { cr_fixed_points(map, buf.as_mut_ptr(), buf.len(), &mut count) }, CrStatus::Ok);
    assert_eq!(count, 2);
    for &t in &buf[..2] {
        let mut ft = 0.0;
        assert_eq!(unsafe { cr_map_eval(map, t, &mut ft) }, CrStatus::Ok);
        let d = (ft - t).rem_euclid(std::f64::consts::TAU);
        assert!(d.min(std::f64::consts::TAU - d) < 1e-9);
    }
    let mut defect = 1.0;
    assert_eq!(unsafe { cr_mobius_reciprocity(map, &mut defect) }, CrStatus::Ok);
    assert!(defect < 1e-9);
    assert_eq!(unsafe { cr_fixed_points(map, buf.as_mut_ptr(), 1, &mut count) }, CrStatus::BufferTooSmall);
    assert_eq!(count, 2);
    unsafe {
        cr_map_free(map);
        cr_oval_free(e);
    }
}

#[test]
fn rotation_of_circle_pair() {
    let c = oval(r#"{"variant": "ellipse", "A": 1, "B": 1}"#);
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { cr_map_direction_pair(c, std::f64::consts::FRAC_PI_4, 0.0, &mut map) }, CrStatus::Ok);
    let (mut rho, mut bound) = (0.0, 0.0);
    assert_eq!(unsafe { cr_rotation_number(map, 0.3, 10_000, &mut rho, &mut bound) }, CrStatus::Ok);
    assert!((rho - 0.25).abs() <= bound, "{rho}");
    unsafe {
        cr_map_free(map);
        cr_oval_free(c);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    let bad = CString::new(r#"{"variant": "ellipse", "A": -1, "B": 1}"#).unwrap();
    assert_eq!(unsafe { cr_oval_from_json(bad.as_ptr(), &mut out) }, CrStatus::Geometry);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
    let junk = CString::new("not json").unwrap();
    assert_eq!(unsafe { cr_oval_from_json(junk.as_ptr(), &mut out) }, CrStatus::InvalidInput);
    assert_eq!(unsafe { cr_oval_from_json(ptr::null(), &mut out) }, CrStatus::NullPointer);

    let c = oval(r#"{"variant": "ellipse", "A": 1, "B": 1}"#);
    let mut map = ptr::null_mut();
    // P outside, Q inside: the pencil line crosses the curve, F reverses orientation
    assert_eq!(unsafe { cr_map_pencil_pair(c, 2.0, 0.0, 0.0, 0.5, &mut map) }, CrStatus::Ok);
    let mut d = 0.0;
    assert_eq!(unsafe { cr_mobius_reciprocity(map, &mut d) }, CrStatus::Dynamics);
    assert!(last_error().contains("orientation"), "{}", last_error());
    unsafe {
        cr_map_free(map);
        cr_oval_free(c);
        cr_oval_free(ptr::null_mut());
    }
}

#[test]
fn series_text() {
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { cr_verify_series(-1, &mut text) }, CrStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { cr_string_free(text) };
    assert!(s.starts_with("b0 = -(3*a+1)/(a+3)\nb1 = 0\n"), "{s}");
    assert_eq!(unsafe { cr_verify_series(3, &mut text) }, CrStatus::InvalidInput);
    assert!(text.is_null());
    let v = unsafe { CStr::from_ptr(cr_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
