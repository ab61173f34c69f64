//! C ABI over the dominance pipeline: parse a problem document, run it,
//! read back the JSON report and the per-level DOT diagrams.
//!
//! Handles are opaque; every constructor has a matching `_free` function and
//! strings returned as `char*` are released with [`gsdom_string_free`]. All
//! functions are safe to call from multiple threads; the error message
//! returned by [`gsdom_last_error`] is thread-local.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use gsdom::report::{ProblemFile, Report, RunOptions};
use gsdom::{Error, Tolerances};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let cstring = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Result codes for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsdomStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input failed validation; see `gsdom_last_error`.
    InvalidInput = 3,
    /// The problem is infeasible or inconsistent at the requested margin.
    Infeasible = 4,
    /// Internal error; see `gsdom_last_error`.
    Internal = 5,
}

fn status_of(err: &Error) -> GsdomStatus {
    match err.exit_code() {
        2 => GsdomStatus::Infeasible,
        _ => GsdomStatus::InvalidInput,
    }
}

/// Opaque parsed problem document.
pub struct GsdomProblem {
    inner: ProblemFile,
}

/// Opaque pipeline result.
pub struct GsdomReport {
    inner: Report,
}

/// Pipeline options. Zero `oracle_samples` disables the sampling oracle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdomRunOptions {
    /// Optimality-sign tolerance for dominance verdicts.
    pub epsilon_opt: f64,
    /// Sampling-oracle sample count per margin level; zero disables.
    pub oracle_samples: u64,
    /// Walk steps between oracle samples.
    pub oracle_burn_in: u64,
    /// Seed for the sampling oracle.
    pub seed: u64,
}

/// Default options: 1e-8 tolerance, oracle disabled, seed 0.
#[no_mangle]
pub extern "C" fn gsdom_run_options_default() -> GsdomRunOptions {
    GsdomRunOptions {
        epsilon_opt: gsdom::EPS_OPT,
        oracle_samples: 0,
        oracle_burn_in: gsdom::oracle::DEFAULT_BURN_IN as u64,
        seed: 0,
    }
}

/// Parse and validate a problem document from JSON text.
///
/// On success writes a handle to `out` and returns `Ok`; the handle is
/// released with [`gsdom_problem_free`].
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` must be a valid
/// location to store a pointer.
#[no_mangle]
pub unsafe extern "C" fn gsdom_problem_parse(
    json: *const c_char,
    out: *mut *mut GsdomProblem,
) -> GsdomStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return GsdomStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("problem text is not valid UTF-8".into());
            return GsdomStatus::InvalidUtf8;
        }
    };
    match ProblemFile::from_json(text) {
        Ok(inner) => {
            clear_error();
            *out = Box::into_raw(Box::new(GsdomProblem { inner }));
            GsdomStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Release a problem handle. Null is ignored.
///
/// # Safety
/// `p` must have been returned by [`gsdom_problem_parse`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gsdom_problem_free(p: *mut GsdomProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Run the pipeline on a parsed problem.
///
/// `options` may be null for defaults. On success writes a report handle to
/// `out`; release it with [`gsdom_report_free`].
///
/// # Safety
/// `problem` must be a live handle from [`gsdom_problem_parse`]; `out` must
/// be a valid location to store a pointer.
#[no_mangle]
pub unsafe extern "C" fn gsdom_run(
    problem: *const GsdomProblem,
    options: *const GsdomRunOptions,
    out: *mut *mut GsdomReport,
) -> GsdomStatus {
    if problem.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return GsdomStatus::NullPointer;
    }
    let c_opts = if options.is_null() {
        gsdom_run_options_default()
    } else {
        *options
    };
    if !c_opts.epsilon_opt.is_finite() || c_opts.epsilon_opt < 0.0 {
        set_error(format!(
            "epsilon_opt must be a nonnegative real, got {}",
            c_opts.epsilon_opt
        ));
        return GsdomStatus::InvalidInput;
    }
    let opts = RunOptions {
        deltas: None,
        tolerances: Tolerances::with_opt(c_opts.epsilon_opt),
        oracle_samples: if c_opts.oracle_samples == 0 {
            None
        } else {
            Some(c_opts.oracle_samples as usize)
        },
        oracle_burn_in: (c_opts.oracle_burn_in as usize).max(1),
        seed: c_opts.seed,
    };
    match gsdom::report::run(&(*problem).inner, &opts) {
        Ok(inner) => {
            clear_error();
            *out = Box::into_raw(Box::new(GsdomReport { inner }));
            GsdomStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Release a report handle. Null is ignored.
///
/// # Safety
/// `r` must have been returned by [`gsdom_run`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_free(r: *mut GsdomReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// The report as pretty-printed JSON; free with [`gsdom_string_free`].
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_json(r: *const GsdomReport) -> *mut c_char {
    if r.is_null() {
        return std::ptr::null_mut();
    }
    match CString::new((*r).inner.to_json()) {
        Ok(s) => s.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Number of margin levels (and DOT diagrams) in the report.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_dot_count(r: *const GsdomReport) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).inner.per_delta.len()
}

/// Margin level `idx`, or NaN when out of range.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_delta(r: *const GsdomReport, idx: usize) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    let report = &(*r).inner;
    report.per_delta.get(idx).map(|d| d.delta).unwrap_or(f64::NAN)
}

/// Maximal consistent margin of the problem's preference system.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_delta_max(r: *const GsdomReport) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    (*r).inner.delta_max
}

/// DOT text of the Hasse diagram at margin level `idx`, or null when out of
/// range; free with [`gsdom_string_free`].
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gsdom_report_dot(r: *const GsdomReport, idx: usize) -> *mut c_char {
    if r.is_null() {
        return std::ptr::null_mut();
    }
    let report = &(*r).inner;
    let Some(dr) = report.per_delta.get(idx) else {
        return std::ptr::null_mut();
    };
    match CString::new(dr.dot.clone()) {
        Ok(s) => s.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a gsdom function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gsdom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread, or null when the last call
/// succeeded; free with [`gsdom_string_free`].
#[no_mangle]
pub extern "C" fn gsdom_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn gsdom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
