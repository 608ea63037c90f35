//! C ABI for the exact delta-invariant calculator.
//!
//! Rational inputs are NUL-terminated strings (`"6/7"`, `"2"`, `"ge1"` for
//! delta values). Results come back through opaque handles that must be
//! released with the matching `*_free` function. Every entry point returns an
//! [`FdStatus`]; on failure [`fd_last_error_message`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fano_delta::angle::{optimal_angle_interval, DivisorPairSpec};
use fano_delta::bundle::{beta_zero, bundle_delta, BundleBoundary, DeltaBreakdown, DeltaKnowledge, Divisor, FanoBase};
use fano_delta::cone::{branched_cone_delta, cone_delta, BranchedConeSpec, ConeBoundary, Verdict};
use fano_delta::{Error, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    Parse = 2,
    Domain = 3,
    Disagreement = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Bit flags for [`fd_delta_result_minimizers`].
pub const FD_MIN_BASE_DIVISOR: u32 = 1;
pub const FD_MIN_V0: u32 = 2;
pub const FD_MIN_VINF: u32 = 4;

/// Verdict codes for [`fd_delta_result_verdict`].
pub const FD_VERDICT_NONE: i32 = -1;
pub const FD_VERDICT_K_SEMISTABLE: i32 = 0;
pub const FD_VERDICT_K_UNSTABLE: i32 = 1;
pub const FD_VERDICT_INDETERMINATE: i32 = 2;

/// An exact rational number.
pub struct FdRational {
    value: Rational,
    text: CString,
}

/// Outcome of a bundle, cone or branched-cone computation.
pub struct FdDeltaResult {
    breakdown: DeltaBreakdown,
    value: CString,
    json: CString,
    upper_bound_only: bool,
    verdict: Option<Verdict>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> FdStatus {
    match err {
        Error::Parse(_) => FdStatus::Parse,
        Error::Domain(_) => FdStatus::Domain,
        Error::Disagreement(_) => FdStatus::Disagreement,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            FdStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("{what} must not be null"));
            FdStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            FdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not valid UTF-8"))))
}

unsafe fn read_rational(p: *const c_char, what: &'static str) -> Result<Rational, Failure> {
    Ok(read_str(p, what)?.parse::<Rational>()?)
}

unsafe fn read_delta(p: *const c_char, what: &'static str) -> Result<DeltaKnowledge, Failure> {
    Ok(read_str(p, what)?.parse::<DeltaKnowledge>()?)
}

fn cstring(s: String) -> CString {
    CString::new(s).expect("no interior NUL")
}

fn new_rational(value: Rational) -> *mut FdRational {
    let text = cstring(value.to_string());
    Box::into_raw(Box::new(FdRational { value, text }))
}

unsafe fn store<T>(out: *mut *mut T, value: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        drop(Box::from_raw(value));
        return Err(Failure::Null("out"));
    }
    *out = value;
    Ok(())
}

fn delta_result(breakdown: DeltaBreakdown, json: String, upper_bound_only: bool, verdict: Option<Verdict>) -> *mut FdDeltaResult {
    Box::into_raw(Box::new(FdDeltaResult {
        value: cstring(breakdown.value.to_string()),
        breakdown,
        json: cstring(json),
        upper_bound_only,
        verdict,
    }))
}

fn to_json<T: serde::Serialize>(body: &T) -> String {
    let mut v = serde_json::to_value(body).expect("serializable");
    if let Some(map) = v.as_object_mut() {
        map.insert("schema".into(), "1".into());
    }
    v.to_string()
}

/// Message for the most recent failure on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `"p/q"`, an integer, or a finite decimal.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_rational_parse(text: *const c_char, out: *mut *mut FdRational) -> FdStatus {
    guard(|| {
        let v = read_rational(text, "text")?;
        store(out, new_rational(v))
    })
}

/// `"p/q"` (or `"p"`), owned by the handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_rational_to_string(r: *const FdRational) -> *const c_char {
    match r.as_ref() {
        Some(r) => r.text.as_ptr(),
        None => ptr::null(),
    }
}

/// Nearest double, for display only.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_rational_to_double(r: *const FdRational) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.value.to_f64())
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_rational_free(r: *mut FdRational) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// `β0(n, r)` for the smooth bundle, `r > 1`.
///
/// # Safety
/// `r` must be a valid string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_beta_zero(n: u32, r: *const c_char, out: *mut *mut FdRational) -> FdStatus {
    guard(|| {
        let r = read_rational(r, "r")?;
        store(out, new_rational(beta_zero(n, &r)?))
    })
}

/// Endpoint `1 - r/n` of the optimal angle interval, `r = 1/λ - 1`.
///
/// # Safety
/// `lambda` must be a valid string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_optimal_angle_endpoint(n: u32, lambda: *const c_char, out: *mut *mut FdRational) -> FdStatus {
    guard(|| {
        let lambda = read_rational(lambda, "lambda")?;
        let res = optimal_angle_interval(&DivisorPairSpec::semistable(n, lambda))?;
        store(out, new_rational(res.endpoint))
    })
}

/// Bundle delta invariant with boundary `a V0 + b Vinf`; `a` and `b` may be
/// null for zero.
///
/// # Safety
/// String arguments must be valid or (for `a`, `b`) null; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fd_bundle_delta(
    n: u32,
    r: *const c_char,
    delta_v: *const c_char,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut FdDeltaResult,
) -> FdStatus {
    guard(|| {
        let r = read_rational(r, "r")?;
        let delta = read_delta(delta_v, "delta_v")?;
        let a = if a.is_null() { Rational::zero() } else { read_rational(a, "a")? };
        let b = if b.is_null() { Rational::zero() } else { read_rational(b, "b")? };
        let res = bundle_delta(&FanoBase::new(n, r, delta)?, &BundleBoundary::new(a, b))?;
        let json = to_json(&res);
        store(out, delta_result(res, json, false, None))
    })
}

/// Cone delta invariant with boundary `c Vinf`; `c` may be null for zero.
///
/// # Safety
/// String arguments must be valid or (for `c`) null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_cone_delta(
    n: u32,
    r: *const c_char,
    delta_v: *const c_char,
    c: *const c_char,
    out: *mut *mut FdDeltaResult,
) -> FdStatus {
    guard(|| {
        let r = read_rational(r, "r")?;
        let delta = read_delta(delta_v, "delta_v")?;
        let c = if c.is_null() { Rational::zero() } else { read_rational(c, "c")? };
        let res = cone_delta(&FanoBase::new(n, r, delta)?, &ConeBoundary::new(c)?)?;
        let json = to_json(&res);
        let upper = res.proof_coverage == fano_delta::cone::ProofCoverage::UpperBoundOnly;
        store(out, delta_result(res.breakdown, json, upper, None))
    })
}

/// Branched hypersurface cone; `delta_pair` may be null when
/// `n+1 <= d <= n+2`.
///
/// # Safety
/// `delta_pair` must be null or a valid string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_branched_cone_delta(
    n: u32,
    k: u32,
    d: u32,
    l: u32,
    delta_pair: *const c_char,
    out: *mut *mut FdDeltaResult,
) -> FdStatus {
    guard(|| {
        let pair = if delta_pair.is_null() { None } else { Some(read_delta(delta_pair, "delta_pair")?) };
        let res = branched_cone_delta(&BranchedConeSpec { n, k, d, l }, pair)?;
        let json = to_json(&res);
        let upper = res.cone.proof_coverage == fano_delta::cone::ProofCoverage::UpperBoundOnly;
        store(out, delta_result(res.cone.breakdown, json, upper, Some(res.verdict)))
    })
}

/// Exact value as `"p/q"`, owned by the result.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_value(res: *const FdDeltaResult) -> *const c_char {
    res.as_ref().map_or(ptr::null(), |r| r.value.as_ptr())
}

/// Copies the value into a new rational handle.
///
/// # Safety
/// `res` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_value_rational(res: *const FdDeltaResult, out: *mut *mut FdRational) -> FdStatus {
    guard(|| {
        let r = res.as_ref().ok_or(Failure::Null("res"))?;
        store(out, new_rational(r.breakdown.value.clone()))
    })
}

/// Bit set of `FD_MIN_*` flags; 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_minimizers(res: *const FdDeltaResult) -> u32 {
    let Some(r) = res.as_ref() else { return 0 };
    r.breakdown
        .minimizers
        .iter()
        .map(|d| match d {
            Divisor::BaseDivisor => FD_MIN_BASE_DIVISOR,
            Divisor::V0 => FD_MIN_V0,
            Divisor::Vinf => FD_MIN_VINF,
        })
        .fold(0, |acc, bit| acc | bit)
}

/// Whether the value is only a lower bound.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_lower_bound_only(res: *const FdDeltaResult) -> bool {
    res.as_ref().is_some_and(|r| r.breakdown.lower_bound_only)
}

/// Whether the cone formula is only a proven upper bound (`r > n+1`).
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_upper_bound_only(res: *const FdDeltaResult) -> bool {
    res.as_ref().is_some_and(|r| r.upper_bound_only)
}

/// One of the `FD_VERDICT_*` codes; `FD_VERDICT_NONE` unless the result came
/// from [`fd_branched_cone_delta`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_verdict(res: *const FdDeltaResult) -> i32 {
    match res.as_ref().and_then(|r| r.verdict) {
        Some(Verdict::KSemistable) => FD_VERDICT_K_SEMISTABLE,
        Some(Verdict::KUnstable) => FD_VERDICT_K_UNSTABLE,
        Some(Verdict::Indeterminate) => FD_VERDICT_INDETERMINATE,
        None => FD_VERDICT_NONE,
    }
}

/// Compact JSON document (schema "1"), owned by the result.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_json(res: *const FdDeltaResult) -> *const c_char {
    res.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Copies the JSON document into a string released by [`fd_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_json_copy(res: *const FdDeltaResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| r.json.clone().into_raw())
}

/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_delta_result_free(res: *mut FdDeltaResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
