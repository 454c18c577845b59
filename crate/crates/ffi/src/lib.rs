//! C ABI over `covarray`.
//!
//! Arrays cross the boundary as opaque `CaArray` handles. Every fallible call
//! returns a `CaStatus`; on failure `ca_last_error` describes the problem.
//! Strings returned by the library must be released with `ca_string_free`,
//! handles with `ca_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use covarray::classify::count_classes;
use covarray::constructions::{
    fixed_matrix_by_name, hadamard_3ca_12x11, johnson_entringer, standard_maximal_2ca, witness_24x12,
};
use covarray::equivalence::{are_equivalent, canonical_form};
use covarray::{is_covering, CoveringArray, Error};

/// Opaque covering array handle.
pub struct CaArray(CoveringArray);

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Internal = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CaStatus {
    match e {
        Error::Parse { .. } => CaStatus::Parse,
        Error::BudgetExceeded { .. } => CaStatus::BudgetExceeded,
        Error::InternalInconsistency(_) | Error::Checkpoint(_) | Error::Io(_) => CaStatus::Internal,
        _ => CaStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (CaStatus, String)>) -> CaStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside covarray");
            CaStatus::Panic
        }
    }
}

fn lib<T>(r: covarray::Result<T>) -> Result<T, (CaStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn handle<'a>(p: *const CaArray) -> Result<&'a CoveringArray, (CaStatus, String)> {
    // SAFETY: the caller passes a live handle or null.
    unsafe { p.as_ref() }
        .map(|a| &a.0)
        .ok_or((CaStatus::NullPointer, "null array handle".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (CaStatus, String)> {
    if p.is_null() {
        return Err((CaStatus::NullPointer, "null string".into()));
    }
    // SAFETY: non-null and NUL-terminated by contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (CaStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), (CaStatus, String)> {
    if p.is_null() {
        Err((CaStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn boxed(a: CoveringArray) -> *mut CaArray {
    Box::into_raw(Box::new(CaArray(a)))
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses the `.ca` text format. Any rejected text gives `CA_STATUS_PARSE`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ca_parse(src: *const c_char, out: *mut *mut CaArray) -> CaStatus {
    guard(|| {
        out_ptr(out)?;
        let s = unsafe { text(src) }?;
        // Any rejection of the text, malformed or inconsistent, is a parse error.
        let a = CoveringArray::parse_ca(s).map_err(|e| (CaStatus::Parse, e.to_string()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = boxed(a) };
        Ok(())
    })
}

/// Builds an `m x n` array over `q` symbols from `m * n` row-major entries.
///
/// # Safety
/// `entries` must point to `m * n` readable bytes and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_new(m: usize, n: usize, q: u8, entries: *const u8, out: *mut *mut CaArray) -> CaStatus {
    guard(|| {
        out_ptr(out)?;
        if entries.is_null() {
            return Err((CaStatus::NullPointer, "null entries".into()));
        }
        let len = m
            .checked_mul(n)
            .ok_or((CaStatus::InvalidArgument, "m * n overflows".into()))?;
        // SAFETY: the caller guarantees `m * n` readable bytes.
        let data = unsafe { std::slice::from_raw_parts(entries, len) }.to_vec();
        let a = lib(CoveringArray::from_flat(m, n, q, data))?;
        unsafe { *out = boxed(a) };
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `array` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ca_free(array: *mut CaArray) {
    if !array.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(array) });
    }
}

/// Writes the dimensions of `array`.
///
/// # Safety
/// `array` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_dims(array: *const CaArray, m: *mut usize, n: *mut usize, q: *mut u8) -> CaStatus {
    guard(|| {
        let a = unsafe { handle(array) }?;
        out_ptr(m)?;
        out_ptr(n)?;
        out_ptr(q)?;
        unsafe {
            *m = a.m();
            *n = a.n();
            *q = a.q();
        }
        Ok(())
    })
}

/// The `.ca` text of `array`, or null on failure. Free with
/// `ca_string_free`.
///
/// # Safety
/// `array` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ca_to_text(array: *const CaArray) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let a = unsafe { handle(array) }?;
        let s = CString::new(a.to_ca_string()).map_err(|_| (CaStatus::Internal, "embedded NUL".into()))?;
        result = s.into_raw();
        Ok(())
    });
    result
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ca_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Sets `*covering` to whether `array` has strength `t`.
///
/// # Safety
/// `array` must be a live handle and `covering` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_verify(array: *const CaArray, t: usize, covering: *mut bool) -> CaStatus {
    guard(|| {
        let a = unsafe { handle(array) }?;
        out_ptr(covering)?;
        let ok = lib(is_covering(a, t))?;
        unsafe { *covering = ok };
        Ok(())
    })
}

/// The canonical representative of the class of `array`.
///
/// # Safety
/// `array` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_canonical(array: *const CaArray, out: *mut *mut CaArray) -> CaStatus {
    guard(|| {
        let a = unsafe { handle(array) }?;
        out_ptr(out)?;
        let c = lib(canonical_form(a))?;
        unsafe { *out = boxed(c.canonical) };
        Ok(())
    })
}

/// Sets `*equivalent` to whether the two arrays are equivalent.
///
/// # Safety
/// Both handles must be live and `equivalent` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_equivalent(a: *const CaArray, b: *const CaArray, equivalent: *mut bool) -> CaStatus {
    guard(|| {
        let (a, b) = unsafe { (handle(a)?, handle(b)?) };
        out_ptr(equivalent)?;
        let eq = lib(are_equivalent(a, b))?;
        unsafe { *equivalent = eq };
        Ok(())
    })
}

/// Builds a named construction. `param` is the size for
/// `"standard-maximal"`, the degree for `"johnson-entringer"`, and ignored
/// otherwise. Other names: `"hadamard-12x11"`, `"witness-24x12"`, and the
/// fixed matrices `"A"`, `"B1"`, `"B2"`, `"D"`, `"E"`, `"CA5x4"`, `"CA10x5"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_construct(name: *const c_char, param: usize, out: *mut *mut CaArray) -> CaStatus {
    guard(|| {
        out_ptr(out)?;
        let name = unsafe { text(name) }?;
        let a = match name {
            "standard-maximal" => lib(standard_maximal_2ca(param))?,
            "johnson-entringer" => lib(johnson_entringer(param))?,
            "hadamard-12x11" => hadamard_3ca_12x11(),
            "witness-24x12" => witness_24x12(),
            other => lib(fixed_matrix_by_name(other))?,
        };
        unsafe { *out = boxed(a) };
        Ok(())
    })
}

/// Number of equivalence classes of `m x n` binary arrays of strength `t`.
///
/// # Safety
/// `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_count_classes(m: usize, t: usize, n: usize, count: *mut usize) -> CaStatus {
    guard(|| {
        out_ptr(count)?;
        let c = lib(count_classes(m, t, n))?;
        unsafe { *count = c };
        Ok(())
    })
}
