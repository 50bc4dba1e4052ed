//! C ABI over the weaktype engine.
//!
//! Functions are handed around as opaque `WtFunction` handles. Every call
//! returns a `WtStatus`; on failure the message is kept per thread and read
//! back with `wt_last_error`. Strings returned to the caller are owned by the
//! caller and released with `wt_string_free`. Rationals cross the boundary as
//! `"p/q"` strings, enclosures additionally as outward-rounded doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use weaktype::cli::{parse_signs, resolve_selector};
use weaktype::construction::ConstructionParams;
use weaktype::numeric::{fmt_pq, parse_rational};
use weaktype::pwfunc::{PiecewiseFn, Refinement};
use weaktype::typeprobe::{verify_lemma, ProbeBudget, Verdict};
use weaktype::{Error, RatInterval};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Parameter = 4,
    Domain = 5,
    /// The budget ran out; outputs still hold the best enclosure reached.
    Inconclusive = 6,
    Size = 7,
    Io = 8,
    Panic = 9,
}

/// Outcome of a certified check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WtVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
}

/// Certified enclosure `lo <= value <= hi`, doubles rounded outward.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WtEnclosure {
    pub lo: f64,
    pub hi: f64,
}

/// Opaque piecewise function.
pub struct WtFunction {
    inner: PiecewiseFn,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(err: &Error) -> WtStatus {
    match err {
        Error::Domain(_) => WtStatus::Domain,
        Error::Parameter(_) => WtStatus::Parameter,
        Error::Inconclusive { .. } => WtStatus::Inconclusive,
        Error::Size(_) => WtStatus::Size,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => WtStatus::Parse,
        Error::Io(_) => WtStatus::Io,
    }
}

struct Fault(WtStatus, String);

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<WtStatus, Fault>>(body: F) -> WtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fault(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WtStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fault> {
    if p.is_null() {
        return Err(Fault(WtStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fault(WtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `enclosure` and `exact` must each be null or writable.
unsafe fn write_enclosure(iv: &RatInterval, enclosure: *mut WtEnclosure, exact: *mut *mut c_char) {
    if !enclosure.is_null() {
        let (lo, hi) = iv.to_f64_outward();
        *enclosure = WtEnclosure { lo, hi };
    }
    if !exact.is_null() {
        *exact = into_c_string(format!("{},{}", fmt_pq(iv.lo()), fmt_pq(iv.hi())));
    }
}

/// # Safety
/// Output pointers must be null or writable.
unsafe fn finish_enclosure(
    result: weaktype::Result<RatInterval>,
    enclosure: *mut WtEnclosure,
    exact: *mut *mut c_char,
) -> Result<WtStatus, Fault> {
    match result {
        Ok(iv) => {
            write_enclosure(&iv, enclosure, exact);
            Ok(WtStatus::Ok)
        }
        Err(Error::Inconclusive { what, best, evaluations }) => {
            write_enclosure(&best, enclosure, exact);
            set_error(&format!("{what}: budget exhausted after {evaluations} evaluations"));
            Ok(WtStatus::Inconclusive)
        }
        Err(e) => Err(e.into()),
    }
}

fn refinement(tol: &str, budget: u64) -> Result<Refinement, Fault> {
    let r = Refinement::new(parse_rational(tol)?)?;
    Ok(if budget == 0 { r } else { r.with_budget(budget) })
}

/// # Safety
/// `f` must be null or a live handle.
unsafe fn handle<'a>(f: *const WtFunction) -> Result<&'a PiecewiseFn, Fault> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| Fault(WtStatus::NullPointer, "function handle is null".into()))
}

/// # Safety
/// `out` must be writable.
unsafe fn store(f: PiecewiseFn, out: *mut *mut WtFunction) -> Result<WtStatus, Fault> {
    *out = Box::into_raw(Box::new(WtFunction { inner: f }));
    Ok(WtStatus::Ok)
}

/// Last error message on this thread. Valid until the next failing call on
/// the same thread; do not free.
#[no_mangle]
pub extern "C" fn wt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a function from a selector such as `"F:10:1"` or `"g:3:2"`.
///
/// # Safety
/// `selector` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_function_from_selector(selector: *const c_char, out: *mut *mut WtFunction) -> WtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fault(WtStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let f = resolve_selector(read_str(selector, "selector")?)?;
        store(f, out)
    })
}

/// Builds a function from its JSON segment list.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_function_from_json(json: *const c_char, out: *mut *mut WtFunction) -> WtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fault(WtStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let f = PiecewiseFn::from_json(read_str(json, "json")?)?;
        store(f, out)
    })
}

/// Serializes a function to JSON; free the result with `wt_string_free`.
///
/// # Safety
/// `f` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_function_to_json(f: *const WtFunction, out: *mut *mut c_char) -> WtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fault(WtStatus::NullPointer, "out is null".into()));
        }
        *out = into_c_string(handle(f)?.to_json()?);
        Ok(WtStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wt_function_free(f: *mut WtFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Exact value at `t` in (0, 1], written as `"p/q"`.
///
/// # Safety
/// `f` must be a live handle, `t` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wt_function_eval(f: *const WtFunction, t: *const c_char, out: *mut *mut c_char) -> WtStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fault(WtStatus::NullPointer, "out is null".into()));
        }
        let v = handle(f)?.eval_exact(&parse_rational(read_str(t, "t")?)?)?;
        *out = into_c_string(fmt_pq(&v));
        Ok(WtStatus::Ok)
    })
}

/// Encloses the weak-L1 quasi-norm to relative tolerance `tol` (a decimal
/// or `p/q` string). `budget == 0` keeps the default evaluation budget.
/// `enclosure` and `exact` (`"lo_p/lo_q,hi_p/hi_q"`) may each be null.
///
/// # Safety
/// `f` must be a live handle, `tol` a NUL-terminated string, outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn wt_weak_norm(
    f: *const WtFunction,
    tol: *const c_char,
    budget: u64,
    enclosure: *mut WtEnclosure,
    exact: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let f = handle(f)?;
        let r = refinement(read_str(tol, "tol")?, budget)?;
        finish_enclosure(r.weak_norm(f), enclosure, exact)
    })
}

/// Encloses the decreasing rearrangement at `t` in (0, 1).
///
/// # Safety
/// As for `wt_weak_norm`; `t` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn wt_rearrangement_at(
    f: *const WtFunction,
    t: *const c_char,
    tol: *const c_char,
    budget: u64,
    enclosure: *mut WtEnclosure,
    exact: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let f = handle(f)?;
        let t = parse_rational(read_str(t, "t")?)?;
        let r = refinement(read_str(tol, "tol")?, budget)?;
        finish_enclosure(r.rearrangement_at(f, &t), enclosure, exact)
    })
}

/// Encloses the measure of `{|f| > lambda}`.
///
/// # Safety
/// As for `wt_weak_norm`; `lambda` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn wt_distribution(
    f: *const WtFunction,
    lambda: *const c_char,
    tol: *const c_char,
    budget: u64,
    enclosure: *mut WtEnclosure,
    exact: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let f = handle(f)?;
        let lambda = parse_rational(read_str(lambda, "lambda")?)?;
        let r = refinement(read_str(tol, "tol")?, budget)?;
        finish_enclosure(r.distribution(f, &lambda), enclosure, exact)
    })
}

/// Runs the sandwich check for base `n`. `signs` is `"all"` or `"sample:K"`.
/// The JSON report, if `report_json` is non-null, must be freed with
/// `wt_string_free`.
///
/// # Safety
/// `tol` and `signs` must be NUL-terminated strings, outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn wt_verify_lemma(
    n: u64,
    tol: *const c_char,
    signs: *const c_char,
    seed: u64,
    verdict: *mut WtVerdict,
    report_json: *mut *mut c_char,
) -> WtStatus {
    guard(|| {
        let mut budget = ProbeBudget::with_tol(parse_rational(read_str(tol, "tol")?)?);
        budget.sign_mode = parse_signs(read_str(signs, "signs")?, seed)?;
        budget.validate()?;
        let report = verify_lemma(&ConstructionParams::new(n)?, &budget)?;
        if !verdict.is_null() {
            *verdict = match report.asserted_verdict() {
                Verdict::Pass => WtVerdict::Pass,
                Verdict::Fail => WtVerdict::Fail,
                Verdict::Inconclusive => WtVerdict::Inconclusive,
            };
        }
        if !report_json.is_null() {
            *report_json = into_c_string(report.to_json()?);
        }
        Ok(WtStatus::Ok)
    })
}
