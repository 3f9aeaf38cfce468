//! C interface to the toric-diagonal library.
//!
//! Objects are opaque handles created by `*_new`/`*_from_json` and released by the matching
//! `*_free`. Every fallible call returns a [`TdStatus`]; the message of the last failure on the
//! calling thread is available from [`td_last_error`]. Strings handed out by the library must be
//! released with [`td_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toric_diagonal::cech::WeightedProjLine;
use toric_diagonal::diagonal::cokernel_report;
use toric_diagonal::fan::Fan;
use toric_diagonal::io::parse_rational_list;
use toric_diagonal::pipeline::{run_pipeline, GroupSpec, Pipeline, PipelineSpec};
use toric_diagonal::resolution::{cellular_differential, exactness_certificate, graded_twists, verify_d_squared};
use toric_diagonal::{Error, ErrorKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    ResourceExhausted = 4,
    Internal = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A parsed fan.
pub struct TdFan {
    inner: Fan,
}

/// A labeled quotient complex together with the lattice data that produced it.
pub struct TdPipeline {
    inner: Pipeline,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> TdStatus {
    set_error(format!("{}: {e}", e.code()));
    match e.kind() {
        ErrorKind::Input => TdStatus::InvalidInput,
        ErrorKind::Resource => TdStatus::ResourceExhausted,
        ErrorKind::Internal => TdStatus::Internal,
    }
}

fn guard<F: FnOnce() -> TdStatus>(f: F) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside toric-diagonal".into());
            TdStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<Option<&'a str>, TdStatus> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s).to_str().map(Some).map_err(|_| {
        set_error("string is not valid UTF-8".into());
        TdStatus::InvalidUtf8
    })
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn give_string(s: String, out: *mut *mut c_char) -> TdStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TdStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte".into());
            TdStatus::Internal
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return TdStatus::NullPointer;
        }
    };
}

macro_rules! try_td {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(&e),
        }
    };
}

/// Message of the last failure on this thread, or null. Owned by the library; valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a fan from JSON `{"dim", "rays", "max_cones"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_fan_from_json(json: *const c_char, out: *mut *mut TdFan) -> TdStatus {
    non_null!(json, out);
    guard(|| {
        let text = match read_str(json) {
            Ok(Some(t)) => t,
            Ok(None) => return TdStatus::NullPointer,
            Err(s) => return s,
        };
        let fan = try_td!(Fan::from_json(text));
        *out = Box::into_raw(Box::new(TdFan { inner: fan }));
        TdStatus::Ok
    })
}

/// # Safety
/// `fan` must be null or a handle from [`td_fan_from_json`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn td_fan_free(fan: *mut TdFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Fan report as JSON.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_fan_check_json(fan: *const TdFan, out: *mut *mut c_char) -> TdStatus {
    non_null!(fan, out);
    guard(|| {
        let report = try_td!((*fan).inner.check());
        give_string(try_td!(serde_json::to_string(&report).map_err(Error::from)), out)
    })
}

/// # Safety
/// `fan` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_fan_is_unimodular(fan: *const TdFan, out: *mut bool) -> TdStatus {
    non_null!(fan, out);
    guard(|| {
        *out = try_td!((*fan).inner.is_unimodular());
        TdStatus::Ok
    })
}

/// Builds the quotient complex.
///
/// `epsilon` is a list like `"1/100,0,0,1/100"`, `group` a list of cyclic factors like `"6"`;
/// either may be null. `window` of 0 picks the smallest sound window.
///
/// # Safety
/// `fan` must be a live handle, the strings null or NUL-terminated, and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_new(
    fan: *const TdFan,
    epsilon: *const c_char,
    group: *const c_char,
    window: u64,
    out: *mut *mut TdPipeline,
) -> TdStatus {
    non_null!(fan, out);
    guard(|| {
        let (eps, grp) = match (read_str(epsilon), read_str(group)) {
            (Ok(e), Ok(g)) => (e.unwrap_or(""), g),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let group = match grp {
            Some(g) => try_td!(GroupSpec::parse(g, None)),
            None => GroupSpec::trivial(),
        };
        let spec = PipelineSpec {
            fan: (*fan).inner.clone(),
            epsilon: try_td!(parse_rational_list(eps)),
            group,
            window: (window > 0).then_some(window),
        };
        let p = try_td!(run_pipeline(&spec));
        *out = Box::into_raw(Box::new(TdPipeline { inner: p }));
        TdStatus::Ok
    })
}

/// # Safety
/// `p` must be null or a handle from [`td_pipeline_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_free(p: *mut TdPipeline) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Copies the f-vector into `buf`. `len` receives the number of entries; if `cap` is too small
/// nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `p` must be a live handle, `buf` valid for `cap` writes, `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_f_vector(p: *const TdPipeline, buf: *mut usize, cap: usize, len: *mut usize) -> TdStatus {
    non_null!(p, len);
    guard(|| {
        let f = (*p).inner.complex.f_vector();
        *len = f.len();
        if cap < f.len() {
            set_error(format!("buffer holds {cap} entries, need {}", f.len()));
            return TdStatus::BufferTooSmall;
        }
        if buf.is_null() {
            set_error("null pointer argument".into());
            return TdStatus::NullPointer;
        }
        ptr::copy_nonoverlapping(f.as_ptr(), buf, f.len());
        TdStatus::Ok
    })
}

/// The quotient complex as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_complex_json(p: *const TdPipeline, out: *mut *mut c_char) -> TdStatus {
    non_null!(p, out);
    guard(|| give_string(try_td!(serde_json::to_string(&(*p).inner.complex).map_err(Error::from)), out))
}

/// The graded cellular complex as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_resolution_json(p: *const TdPipeline, out: *mut *mut c_char) -> TdStatus {
    non_null!(p, out);
    guard(|| {
        let p = &(*p).inner;
        let cc = try_td!(cellular_differential(&p.complex).and_then(|cc| graded_twists(&cc, &p.degree_map())));
        give_string(try_td!(serde_json::to_string(&cc).map_err(Error::from)), out)
    })
}

/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_verify_d_squared(p: *const TdPipeline, out: *mut bool) -> TdStatus {
    non_null!(p, out);
    guard(|| {
        *out = verify_d_squared(&try_td!(cellular_differential(&(*p).inner.complex)));
        TdStatus::Ok
    })
}

/// `exact` is set when every degree restriction is acyclic in positive dimensions,
/// `resolves_image` when it is also connected.
///
/// # Safety
/// `p` must be a live handle; `exact` and `resolves_image` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_exactness(p: *const TdPipeline, exact: *mut bool, resolves_image: *mut bool) -> TdStatus {
    non_null!(p, exact, resolves_image);
    guard(|| {
        let r = try_td!(exactness_certificate(&(*p).inner.complex, None));
        *exact = r.is_exact();
        *resolves_image = r.resolves_image();
        TdStatus::Ok
    })
}

/// Cokernel report as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_pipeline_cokernel_json(p: *const TdPipeline, k_max: u32, out: *mut *mut c_char) -> TdStatus {
    non_null!(p, out);
    guard(|| {
        let r = try_td!(cokernel_report(&(*p).inner, k_max));
        give_string(try_td!(serde_json::to_string(&r).map_err(Error::from)), out)
    })
}

/// `h⁰` and `h¹` of `O(n)` on `P(a, b)`.
///
/// # Safety
/// `h0` and `h1` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn td_cech_h_dims(a: i64, b: i64, n: i64, h0: *mut usize, h1: *mut usize) -> TdStatus {
    non_null!(h0, h1);
    guard(|| {
        let x = try_td!(WeightedProjLine::new(a, b));
        (*h0, *h1) = x.h_dims(n);
        TdStatus::Ok
    })
}
