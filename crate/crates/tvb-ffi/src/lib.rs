//! C ABI for the tvb toolkit.
//!
//! Conventions: every fallible call returns a [`TvbStatus`]; results come
//! back through out-pointers. Complexes are opaque handles freed with
//! [`tvb_complex_free`]; structured results (homology profiles, criterion
//! reports, search results) are JSON strings freed with
//! [`tvb_string_free`]. On any non-`Ok` status a thread-local message is
//! available via [`tvb_last_error_message`]. Panics never cross the
//! boundary; they surface as `InternalError`.

// callers are C: pointer validity is part of each function's documented
// contract, not of the Rust signature
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tvb_core::complex::{ComplexError, SimplicialComplex};
use tvb_core::criterion::{guarantee_criterion, CriterionInput};
use tvb_core::geometry::ColoredConfiguration;
use tvb_core::homology::{betti_numbers, homological_connectivity, parse_coefficients};
use tvb_core::search::find_colored_tverberg;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    BudgetExceeded = 4,
    InternalError = 5,
}

/// Opaque handle to an immutable simplicial complex.
#[repr(C)]
pub struct TvbComplex {
    _private: [u8; 0],
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn guarded(body: impl FnOnce() -> TvbStatus) -> TvbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TvbStatus::InternalError
        }
    }
}

fn complex_ref<'a>(handle: *const TvbComplex) -> Option<&'a SimplicialComplex> {
    if handle.is_null() {
        None
    } else {
        Some(unsafe { &*(handle as *const SimplicialComplex) })
    }
}

fn complex_into_handle(complex: SimplicialComplex) -> *mut TvbComplex {
    Box::into_raw(Box::new(complex)) as *mut TvbComplex
}

fn string_out(out: *mut *mut c_char, text: String) -> TvbStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            TvbStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte");
            TvbStatus::InternalError
        }
    }
}

fn utf8_in<'a>(text: *const c_char) -> Result<&'a str, TvbStatus> {
    if text.is_null() {
        set_error("null string argument");
        return Err(TvbStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(text) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TvbStatus::InvalidArgument
    })
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn tvb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or NULL. The caller
/// frees it with `tvb_string_free`.
#[no_mangle]
pub extern "C" fn tvb_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Frees a string returned by this library. NULL is ignored.
#[no_mangle]
pub extern "C" fn tvb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Frees a complex handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn tvb_complex_free(handle: *mut TvbComplex) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle as *mut SimplicialComplex) });
    }
}

/// Builds the `m x n` chessboard complex into `*out`.
#[no_mangle]
pub extern "C" fn tvb_chessboard_new(m: u32, n: u32, out: *mut *mut TvbComplex) -> TvbStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return TvbStatus::NullPointer;
        }
        match SimplicialComplex::chessboard(m, n) {
            Ok(complex) => {
                unsafe { *out = complex_into_handle(complex) };
                TvbStatus::Ok
            }
            Err(e @ ComplexError::EmptyChessboardSide { .. }) => {
                set_error(e.to_string());
                TvbStatus::InvalidArgument
            }
            Err(e @ ComplexError::FaceBudgetExceeded { .. }) => {
                set_error(e.to_string());
                TvbStatus::BudgetExceeded
            }
        }
    })
}

/// Joins two complexes into `*out` (left factor keeps its vertex tags).
#[no_mangle]
pub extern "C" fn tvb_complex_join(
    left: *const TvbComplex,
    right: *const TvbComplex,
    out: *mut *mut TvbComplex,
) -> TvbStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return TvbStatus::NullPointer;
        }
        let (Some(a), Some(b)) = (complex_ref(left), complex_ref(right)) else {
            set_error("null complex handle");
            return TvbStatus::NullPointer;
        };
        match a.join(b) {
            Ok(joined) => {
                unsafe { *out = complex_into_handle(joined) };
                TvbStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                TvbStatus::BudgetExceeded
            }
        }
    })
}

/// Dimension of the complex (-1 for the empty complex, -2 on NULL).
#[no_mangle]
pub extern "C" fn tvb_complex_dim(handle: *const TvbComplex) -> i64 {
    complex_ref(handle).map_or(-2, SimplicialComplex::dim)
}

/// Copies the f-vector `(f_-1, f_0, ..., f_dim)` into `buf` and stores the
/// entry count in `*written`. Fails with `InvalidArgument` if `cap` is too
/// small (`*written` then holds the required length).
#[no_mangle]
pub extern "C" fn tvb_complex_f_vector(
    handle: *const TvbComplex,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> TvbStatus {
    guarded(|| {
        let Some(complex) = complex_ref(handle) else {
            set_error("null complex handle");
            return TvbStatus::NullPointer;
        };
        if written.is_null() {
            set_error("null written pointer");
            return TvbStatus::NullPointer;
        }
        let f = complex.f_vector();
        unsafe { *written = f.len() };
        if cap < f.len() {
            set_error(format!("buffer holds {cap} entries, need {}", f.len()));
            return TvbStatus::InvalidArgument;
        }
        if buf.is_null() {
            set_error("null buffer");
            return TvbStatus::NullPointer;
        }
        let target = unsafe { std::slice::from_raw_parts_mut(buf, f.len()) };
        target.copy_from_slice(&f);
        TvbStatus::Ok
    })
}

/// Reduced homology profile of the complex over one coefficient system
/// (`"Q"`, `"Z"`, or `"Z<p>"`), as a JSON string.
#[no_mangle]
pub extern "C" fn tvb_complex_homology_json(
    handle: *const TvbComplex,
    coefficients: *const c_char,
    out_json: *mut *mut c_char,
) -> TvbStatus {
    guarded(|| {
        let Some(complex) = complex_ref(handle) else {
            set_error("null complex handle");
            return TvbStatus::NullPointer;
        };
        if out_json.is_null() {
            set_error("null out pointer");
            return TvbStatus::NullPointer;
        }
        let text = match utf8_in(coefficients) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let system = match parse_coefficients(text) {
            Ok(s) => s,
            Err(e) => {
                set_error(e);
                return TvbStatus::InvalidArgument;
            }
        };
        match betti_numbers(complex, system) {
            Ok(profile) => string_out(
                out_json,
                serde_json::to_string(&profile).expect("profile serializes"),
            ),
            Err(e) => {
                set_error(e.to_string());
                TvbStatus::InvalidArgument
            }
        }
    })
}

/// Homological connectivity estimate over a comma-separated coefficient
/// list (empty string = automatic choice), as a JSON string.
#[no_mangle]
pub extern "C" fn tvb_complex_connectivity_json(
    handle: *const TvbComplex,
    coefficients: *const c_char,
    out_json: *mut *mut c_char,
) -> TvbStatus {
    guarded(|| {
        let Some(complex) = complex_ref(handle) else {
            set_error("null complex handle");
            return TvbStatus::NullPointer;
        };
        if out_json.is_null() {
            set_error("null out pointer");
            return TvbStatus::NullPointer;
        }
        let text = match utf8_in(coefficients) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let systems = if text.trim().is_empty() {
            tvb_core::homology::default_coefficients(complex)
        } else {
            match text.split(',').map(parse_coefficients).collect() {
                Ok(s) => s,
                Err(e) => {
                    set_error(e);
                    return TvbStatus::InvalidArgument;
                }
            }
        };
        match homological_connectivity(complex, &systems) {
            Ok(estimate) => string_out(
                out_json,
                serde_json::to_string(&estimate).expect("estimate serializes"),
            ),
            Err(e) => {
                set_error(e.to_string());
                TvbStatus::InvalidArgument
            }
        }
    })
}

/// Evaluates the rainbow Tverberg guarantee criterion for `(d, r, cards)`
/// and returns the full report as a JSON string.
#[no_mangle]
pub extern "C" fn tvb_criterion_json(
    d: u64,
    r: u64,
    cards: *const u64,
    cards_len: usize,
    out_json: *mut *mut c_char,
) -> TvbStatus {
    guarded(|| {
        if out_json.is_null() || (cards.is_null() && cards_len > 0) {
            set_error("null pointer argument");
            return TvbStatus::NullPointer;
        }
        let cards = if cards_len == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(cards, cards_len) }.to_vec()
        };
        let input = match CriterionInput::new(d, r, cards) {
            Ok(i) => i,
            Err(e) => {
                set_error(e.to_string());
                return TvbStatus::InvalidArgument;
            }
        };
        match guarantee_criterion(&input) {
            Ok(report) => string_out(
                out_json,
                serde_json::to_string(&report).expect("report serializes"),
            ),
            Err(e) => {
                set_error(e.to_string());
                TvbStatus::InvalidArgument
            }
        }
    })
}

/// Searches a JSON configuration (fields `dimension`, `points`, `colors`)
/// for `r` pairwise disjoint rainbow faces with a common hull point.
/// Returns `{"found": ..., "partition": ..., "witness": ...}` as JSON.
#[no_mangle]
pub extern "C" fn tvb_find_tverberg_json(
    config_json: *const c_char,
    r: u64,
    out_json: *mut *mut c_char,
) -> TvbStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null out pointer");
            return TvbStatus::NullPointer;
        }
        let text = match utf8_in(config_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let config: ColoredConfiguration = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(format!("line {} column {}: {e}", e.line(), e.column()));
                return TvbStatus::ParseError;
            }
        };
        match find_colored_tverberg(&config, r) {
            Ok(result) => {
                let payload = match result {
                    Some((partition, witness)) => serde_json::json!({
                        "found": true,
                        "partition": partition,
                        "witness": witness,
                    }),
                    None => serde_json::json!({ "found": false }),
                };
                string_out(out_json, payload.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                TvbStatus::InvalidArgument
            }
        }
    })
}
