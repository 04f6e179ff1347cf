//! C interface to `rephom`.
//!
//! Objects are opaque handles released with their `_free` function. Calls
//! return a [`RephomStatus`]; on failure [`rephom_last_error`] describes the
//! problem for the calling thread. Strings returned by the library are
//! released with [`rephom_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rephom::cli::{compute_with, resolve_group, Input, JobResult};
use rephom::drinfeld::drinfeld_freeness_check;
use rephom::lie::LieAlgebraData;
use rephom::macdonald::{verify_q_identity, RootSystem};
use rephom::models::{model_from_str, Space};
use rephom::report::{envelope, series_json};
use serde_json::{json, Map, Value};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RephomStatus {
    Ok = 0,
    /// The computation ran and a checked identity failed.
    MathFailure = 1,
    /// Unknown space or group, malformed model, insufficient bounds.
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Internal = 5,
}

/// A catalog space or a parsed model.
pub struct RephomSpace(Input);

/// A Lie algebra.
pub struct RephomGroup(LieAlgebraData);

/// A JSON report with its verdict.
pub struct RephomReport {
    json: Value,
    passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).expect("no interior nul")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(RephomStatus, String);

fn input_fail(e: impl ToString) -> Fail {
    Fail(RephomStatus::InputError, e.to_string())
}

/// Runs `f` with panics and errors turned into a status.
fn guard(f: impl FnOnce() -> Result<RephomStatus, Fail>) -> RephomStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            set_error(format!("internal error: {msg}"));
            RephomStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(RephomStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(RephomStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(RephomStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(RephomStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_report(out: *mut *mut RephomReport, r: JobResult) -> Result<RephomStatus, Fail> {
    let status = if r.passed { RephomStatus::Ok } else { RephomStatus::MathFailure };
    put(out, RephomReport { json: r.report, passed: r.passed })?;
    Ok(status)
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rephom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The caller
/// owns the returned string.
#[no_mangle]
pub extern "C" fn rephom_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rephom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a catalog space such as `cp:2` or `sphere(3)`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_space_parse(spec: *const c_char, out: *mut *mut RephomSpace) -> RephomStatus {
    guard(|| {
        let s = str_arg(spec, "spec")?;
        let sp: Space = s.parse().map_err(input_fail)?;
        put(out, RephomSpace(Input::Space(sp)))?;
        Ok(RephomStatus::Ok)
    })
}

/// Parses and validates a Quillen or Sullivan model given as JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_space_from_model_json(json: *const c_char, out: *mut *mut RephomSpace) -> RephomStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        let m = model_from_str(s).map_err(input_fail)?;
        m.validate().map_err(input_fail)?;
        put(out, RephomSpace(Input::File("<model>".into(), m)))?;
        Ok(RephomStatus::Ok)
    })
}

/// # Safety
/// `space` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rephom_space_free(space: *mut RephomSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Built-in Lie algebra by name (`sl2`, `torus(2)`, …) or a path to an algebra file.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_group_new(name: *const c_char, out: *mut *mut RephomGroup) -> RephomStatus {
    guard(|| {
        let s = str_arg(name, "name")?;
        put(out, RephomGroup(resolve_group(s).map_err(input_fail)?))?;
        Ok(RephomStatus::Ok)
    })
}

/// Dimension of the algebra, or 0 for null.
///
/// # Safety
/// `group` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn rephom_group_dim(group: *const RephomGroup) -> usize {
    group.as_ref().map_or(0, |g| g.0.dim)
}

/// # Safety
/// `group` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rephom_group_free(group: *mut RephomGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Representation homology through `max_degree`; with `invariants_only`
/// nonzero only the `G`-invariant part.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_compute(
    space: *const RephomSpace,
    group: *const RephomGroup,
    max_degree: i64,
    invariants_only: i32,
    out: *mut *mut RephomReport,
) -> RephomStatus {
    guard(|| {
        let sp = ref_arg(space, "space")?;
        let g = ref_arg(group, "group")?;
        let r = compute_with(&sp.0, &g.0, max_degree, None, invariants_only != 0).map_err(input_fail)?;
        put_report(out, r)
    })
}

/// Freeness of the invariant part against the Hodge prediction. Returns
/// [`RephomStatus::MathFailure`] with a report when the check fails.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_drinfeld_check(
    space: *const RephomSpace,
    group: *const RephomGroup,
    max_degree: i64,
    out: *mut *mut RephomReport,
) -> RephomStatus {
    guard(|| {
        let Input::Space(sp) = &ref_arg(space, "space")?.0 else {
            return Err(input_fail("the freeness check needs a catalog space"));
        };
        let g = ref_arg(group, "group")?;
        if max_degree < 1 {
            return Err(input_fail("max_degree must be at least 1"));
        }
        let r = drinfeld_freeness_check(sp, &g.0, max_degree).map_err(input_fail)?;
        let mut body = Map::new();
        body.insert("space".into(), json!(r.space));
        body.insert("group".into(), json!(r.group));
        body.insert("generator_degrees".into(), json!(r.generators));
        body.insert("free_series".into(), series_json(&r.free_series));
        body.insert("invariant_series".into(), series_json(&r.invariant_series));
        body.insert("verdict".into(), json!(if r.passed() { "PASS" } else { "FAIL" }));
        put_report(out, JobResult { report: envelope("drinfeld-check", body), passed: r.passed() })
    })
}

/// The constant-term `q`-identity for a root system at level `r`.
///
/// # Safety
/// `type_rank` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rephom_macdonald_q(type_rank: *const c_char, r: u32, out: *mut *mut RephomReport) -> RephomStatus {
    guard(|| {
        let rs = RootSystem::new(str_arg(type_rank, "type_rank")?).map_err(input_fail)?;
        if r == 0 {
            return Err(input_fail("r must be at least 1"));
        }
        let rep = verify_q_identity(&rs, r as usize);
        let mut body = Map::new();
        body.insert("type".into(), json!(rs.type_rank));
        body.insert("r".into(), json!(r));
        body.insert("chi_ct_q".into(), series_json(&rep.lhs));
        body.insert("chi_product_q".into(), series_json(&rep.rhs));
        body.insert("verdict".into(), json!(if rep.passed() { "PASS" } else { "FAIL" }));
        put_report(out, JobResult { report: envelope("macdonald", body), passed: rep.passed() })
    })
}

/// 1 if the report's checks passed, 0 otherwise or for null.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn rephom_report_passed(report: *const RephomReport) -> i32 {
    report.as_ref().map_or(0, |r| r.passed as i32)
}

/// The report as pretty JSON; the caller owns the string. Null for null.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn rephom_report_json(report: *const RephomReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => to_c_string(serde_json::to_string_pretty(&r.json).expect("serializable")),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rephom_report_free(report: *mut RephomReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
