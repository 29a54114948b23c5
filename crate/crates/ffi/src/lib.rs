//! C ABI over the `hyperorbit` decision engine.
//!
//! Every function returns an [`HoStatus`]; on failure a message is available
//! from [`ho_last_error`] on the same thread. Handles are opaque and must be
//! released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperorbit::config::{BackendChoice, RunConfig, DEFAULT_MAX_RELATION_NORM, DEFAULT_PREC};
use hyperorbit::example::{ayadi_exact, ayadi_numeric};
use hyperorbit::pipeline::{decide_hypercyclic, HypercyclicStatus, HypercyclicityReport};
use hyperorbit::presentation::GroupPresentation;
use hyperorbit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SchemaViolation = 4,
    InvalidInput = 5,
    PipelineError = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoVerdict {
    Hypercyclic = 0,
    NotHypercyclic = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoBackend {
    Auto = 0,
    Exact = 1,
    Numeric = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HoConfig {
    pub prec: usize,
    pub max_relation_norm: u64,
    pub include_first_block: bool,
    pub backend: HoBackend,
    pub seed: u64,
}

/// Parsed group presentation.
pub struct HoPresentation {
    inner: GroupPresentation,
}

/// Outcome of [`ho_decide`].
pub struct HoReport {
    inner: HypercyclicityReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> HoStatus {
    match e.root() {
        Error::Parse { .. } => HoStatus::ParseError,
        Error::Schema(_) => HoStatus::SchemaViolation,
        _ if e.is_input_error() => HoStatus::InvalidInput,
        _ => HoStatus::PipelineError,
    }
}

fn fail(e: Error) -> HoStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> HoStatus) -> HoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            HoStatus::Panic
        }
    }
}

fn config_from(c: &HoConfig) -> RunConfig {
    RunConfig {
        prec: c.prec,
        max_relation_norm: c.max_relation_norm,
        include_first_block: c.include_first_block,
        backend: match c.backend {
            HoBackend::Auto => BackendChoice::Auto,
            HoBackend::Exact => BackendChoice::Exact,
            HoBackend::Numeric => BackendChoice::Numeric,
        },
        seed: c.seed,
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ho_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ho_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Fills `out` with the defaults (192 bits, relation bound 10^6, auto backend).
///
/// # Safety
/// `out` must be null or point to writable memory for an `HoConfig`.
#[no_mangle]
pub unsafe extern "C" fn ho_config_default(out: *mut HoConfig) -> HoStatus {
    if out.is_null() {
        return HoStatus::NullPointer;
    }
    out.write(HoConfig {
        prec: DEFAULT_PREC,
        max_relation_norm: DEFAULT_MAX_RELATION_NORM,
        include_first_block: false,
        backend: HoBackend::Auto,
        seed: 0,
    });
    HoStatus::Ok
}

/// Parses a presentation from a NUL-terminated JSON string.
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ho_presentation_from_json(json: *const c_char, out: *mut *mut HoPresentation) -> HoStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return HoStatus::NullPointer;
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            set_error("input is not valid UTF-8");
            return HoStatus::InvalidUtf8;
        };
        match GroupPresentation::from_json_str(text) {
            Ok(g) => {
                out.write(Box::into_raw(Box::new(HoPresentation { inner: g })));
                HoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The built-in two-dimensional example; `numeric != 0` gives the form without logs.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ho_presentation_example(numeric: i32, out: *mut *mut HoPresentation) -> HoStatus {
    guard(|| {
        if out.is_null() {
            return HoStatus::NullPointer;
        }
        let g = if numeric != 0 { ayadi_numeric() } else { ayadi_exact() };
        out.write(Box::into_raw(Box::new(HoPresentation { inner: g })));
        HoStatus::Ok
    })
}

/// Dimension `n` and generator count `p`.
///
/// # Safety
/// `g` must be null or a live handle; `n` and `p` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ho_presentation_shape(g: *const HoPresentation, n: *mut usize, p: *mut usize) -> HoStatus {
    let Some(g) = g.as_ref() else {
        return HoStatus::NullPointer;
    };
    if n.is_null() || p.is_null() {
        return HoStatus::NullPointer;
    }
    n.write(g.inner.n);
    p.write(g.inner.p());
    HoStatus::Ok
}

/// # Safety
/// `g` must be null or a handle from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn ho_presentation_free(g: *mut HoPresentation) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Runs the full decision. `config` may be null for the defaults.
///
/// # Safety
/// `g` must be a live handle; `config` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ho_decide(g: *const HoPresentation, config: *const HoConfig, out: *mut *mut HoReport) -> HoStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            return HoStatus::NullPointer;
        };
        if out.is_null() {
            return HoStatus::NullPointer;
        }
        let cfg = config.as_ref().map_or_else(RunConfig::default, config_from);
        match decide_hypercyclic(&g.inner, &cfg) {
            Ok(report) => {
                let text = serde_json::to_string(&report.to_json()).unwrap_or_default();
                let json = CString::new(text).unwrap_or_default();
                out.write(Box::into_raw(Box::new(HoReport { inner: report, json })));
                HoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be a live report; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ho_report_verdict(r: *const HoReport, out: *mut HoVerdict) -> HoStatus {
    let Some(r) = r.as_ref() else {
        return HoStatus::NullPointer;
    };
    if out.is_null() {
        return HoStatus::NullPointer;
    }
    out.write(match r.inner.status {
        HypercyclicStatus::Hypercyclic => HoVerdict::Hypercyclic,
        HypercyclicStatus::NotHypercyclic => HoVerdict::NotHypercyclic,
        HypercyclicStatus::Inconclusive => HoVerdict::Inconclusive,
    });
    HoStatus::Ok
}

/// The report as compact JSON, owned by the report.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn ho_report_json(r: *const HoReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Writes the witness `w0` as `re_1, im_1, re_2, ...` into `buf`. `needed`
/// receives the required length (`2n`, or 0 when no witness was computed).
///
/// # Safety
/// `r` must be a live report; `buf` must hold `len` doubles; `needed` writable.
#[no_mangle]
pub unsafe extern "C" fn ho_report_witness(r: *const HoReport, buf: *mut f64, len: usize, needed: *mut usize) -> HoStatus {
    let Some(r) = r.as_ref() else {
        return HoStatus::NullPointer;
    };
    if needed.is_null() {
        return HoStatus::NullPointer;
    }
    let values: Vec<f64> = r
        .inner
        .witness()
        .map(|w| w.iter().flat_map(|z| { let c = z.to_c64(); [c.re, c.im] }).collect())
        .unwrap_or_default();
    needed.write(values.len());
    if values.is_empty() {
        return HoStatus::Ok;
    }
    if buf.is_null() {
        return HoStatus::NullPointer;
    }
    if len < values.len() {
        set_error(format!("witness needs {} doubles, buffer holds {len}", values.len()));
        return HoStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    HoStatus::Ok
}

/// # Safety
/// `r` must be null or a report from this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn ho_report_free(r: *mut HoReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
