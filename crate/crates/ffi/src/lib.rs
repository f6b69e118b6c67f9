//! C ABI over `conic_rigidity`.
//!
//! Curves and maps are opaque handles created by `cr_*_new` style calls and
//! released with the matching `*_free`. Every fallible call returns a
//! [`CrStatus`]; on failure `cr_last_error()` describes the error on the
//! calling thread. Strings returned by the library are released with
//! `cr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use conic_rigidity::dynamics::{fixed_points, mobius_reciprocity, rotation_number, CircleMap, DynamicsError, Factor};
use conic_rigidity::geometry::{Oval, OvalSpec, Vec2};
use conic_rigidity::symbolic::{verify_series, KSign, DEFAULT_CONDITION_ORDER};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Geometry = 3,
    Dynamics = 4,
    /// Computation finished but differs from the reference.
    Mismatch = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Opaque curve handle.
pub struct CrOval {
    oval: Arc<Oval>,
}

/// Opaque circle-map handle.
pub struct CrMap {
    map: CircleMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: CrStatus, msg: impl Into<String>) -> CrStatus {
    set_error(msg);
    status
}

fn dynamics_status(e: DynamicsError) -> CrStatus {
    let status = match e {
        DynamicsError::Geometry(_) => CrStatus::Geometry,
        DynamicsError::InvalidInput(_) => CrStatus::InvalidInput,
        DynamicsError::NoConvergence(_) => CrStatus::Internal,
        _ => CrStatus::Dynamics,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `CR_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> CrStatus) -> CrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CrStatus::Internal, "panic inside conic_rigidity"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a curve from a JSON spec such as
/// `{"variant": "ellipse", "A": 2, "B": 1}`.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_oval_from_json(spec_json: *const c_char, out: *mut *mut CrOval) -> CrStatus {
    guard(|| {
        if spec_json.is_null() || out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(spec_json).to_str() else {
            return fail(CrStatus::InvalidInput, "spec is not UTF-8");
        };
        let spec: OvalSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(CrStatus::InvalidInput, e.to_string()),
        };
        match Oval::new(spec) {
            Ok(oval) => {
                *out = Box::into_raw(Box::new(CrOval { oval: Arc::new(oval) }));
                CrStatus::Ok
            }
            Err(e) => fail(CrStatus::Geometry, e.to_string()),
        }
    })
}

/// # Safety
/// `oval` must be NULL or a live handle from `cr_oval_from_json`.
#[no_mangle]
pub unsafe extern "C" fn cr_oval_free(oval: *mut CrOval) {
    if !oval.is_null() {
        drop(Box::from_raw(oval));
    }
}

/// Point `gamma(t)`.
///
/// # Safety
/// `oval` must be a live handle; `x` and `y` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_oval_point(oval: *const CrOval, t: f64, x: *mut f64, y: *mut f64) -> CrStatus {
    guard(|| {
        if oval.is_null() || x.is_null() || y.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        let p = (*oval).oval.point(t);
        *x = p.x;
        *y = p.y;
        CrStatus::Ok
    })
}

unsafe fn new_map(oval: *const CrOval, outer: Factor, inner: Factor, out: *mut *mut CrMap) -> CrStatus {
    guard(|| {
        if oval.is_null() || out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match CircleMap::pair(&(*oval).oval, outer, inner) {
            Ok(map) => {
                *out = Box::into_raw(Box::new(CrMap { map }));
                CrStatus::Ok
            }
            Err(e) => dynamics_status(e),
        }
    })
}

/// `f_P o f_Q` for pencils through `P = (px, py)` and `Q = (qx, qy)`.
///
/// # Safety
/// `oval` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_map_pencil_pair(
    oval: *const CrOval,
    px: f64,
    py: f64,
    qx: f64,
    qy: f64,
    out: *mut *mut CrMap,
) -> CrStatus {
    new_map(oval, Factor::Pencil { p: Vec2::new(px, py) }, Factor::Pencil { p: Vec2::new(qx, qy) }, out)
}

/// `f_u o f_v` for parallel chords at direction angles `angle_u`, `angle_v`.
///
/// # Safety
/// `oval` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_map_direction_pair(
    oval: *const CrOval,
    angle_u: f64,
    angle_v: f64,
    out: *mut *mut CrMap,
) -> CrStatus {
    new_map(oval, Factor::direction_angle(angle_u), Factor::direction_angle(angle_v), out)
}

/// # Safety
/// `map` must be NULL or a live map handle.
#[no_mangle]
pub unsafe extern "C" fn cr_map_free(map: *mut CrMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_map_eval(map: *const CrMap, t: f64, out: *mut f64) -> CrStatus {
    guard(|| {
        if map.is_null() || out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        *out = (*map).map.eval(t);
        CrStatus::Ok
    })
}

/// Rotation number from `iterations` steps starting at `x0`, with its
/// error bound.
///
/// # Safety
/// `map` must be a live handle; `value` and `error_bound` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_rotation_number(
    map: *const CrMap,
    x0: f64,
    iterations: usize,
    value: *mut f64,
    error_bound: *mut f64,
) -> CrStatus {
    guard(|| {
        if map.is_null() || value.is_null() || error_bound.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        match rotation_number(&(*map).map, x0, iterations) {
            Ok(r) => {
                *value = r.value;
                *error_bound = r.error_bound;
                CrStatus::Ok
            }
            Err(e) => dynamics_status(e),
        }
    })
}

/// Fixed parameters of the map. `*count` receives the number found; when
/// it exceeds `capacity` nothing is written to `buffer` and
/// `CR_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `map` must be a live handle, `count` writable and `buffer` valid for
/// `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn cr_fixed_points(
    map: *const CrMap,
    buffer: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> CrStatus {
    guard(|| {
        if map.is_null() || count.is_null() || (buffer.is_null() && capacity > 0) {
            return fail(CrStatus::NullPointer, "null argument");
        }
        let fixed = fixed_points(&(*map).map);
        *count = fixed.len();
        if fixed.len() > capacity {
            return fail(CrStatus::BufferTooSmall, format!("{} fixed points, capacity {capacity}", fixed.len()));
        }
        if !fixed.is_empty() {
            ptr::copy_nonoverlapping(fixed.as_ptr(), buffer, fixed.len());
        }
        CrStatus::Ok
    })
}

/// `|F'(x1) F'(x2) - 1|` at the two fixed points of an orientation
/// preserving map.
///
/// # Safety
/// `map` must be a live handle and `defect` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_mobius_reciprocity(map: *const CrMap, defect: *mut f64) -> CrStatus {
    guard(|| {
        if map.is_null() || defect.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        match mobius_reciprocity(&(*map).map) {
            Ok(d) => {
                *defect = d.reciprocity_defect;
                CrStatus::Ok
            }
            Err(e) => dynamics_status(e),
        }
    })
}

/// Solves the series expansion for `k_sign` = +1 or -1 and writes its
/// canonical text to `*text` (free with `cr_string_free`). Returns
/// `CR_STATUS_MISMATCH` when the result differs from the golden file; the
/// text is still written.
///
/// # Safety
/// `text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_verify_series(k_sign: i32, text: *mut *mut c_char) -> CrStatus {
    guard(|| {
        if text.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        *text = ptr::null_mut();
        let Some(sign) = KSign::from_i64(k_sign as i64) else {
            return fail(CrStatus::InvalidInput, format!("k_sign must be +1 or -1, got {k_sign}"));
        };
        let report = match verify_series(sign, DEFAULT_CONDITION_ORDER) {
            Ok(r) => r,
            Err(e) => return fail(CrStatus::Internal, e.to_string()),
        };
        *text = CString::new(report.canonical_text()).expect("no NUL in report").into_raw();
        if report.passed() {
            CrStatus::Ok
        } else if !report.certified() {
            fail(CrStatus::Internal, "residual certificate is not all-zero")
        } else {
            fail(CrStatus::Mismatch, "result differs from the golden file")
        }
    })
}
