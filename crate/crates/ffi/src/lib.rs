//! C interface to `kloos`.
//!
//! A field is created with [`kloos_field_new`] and released with
//! [`kloos_field_free`]. Every fallible call returns a [`KloosStatus`];
//! on failure [`kloos_last_error`] describes what went wrong on the calling
//! thread. Strings handed out through `out` parameters are owned by the
//! caller and must be released with [`kloos_string_free`].
//!
//! Big integers cross the boundary as decimal strings or inside JSON text.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kloos::charsum::{self, SumTables};
use kloos::constants::{family_constants, CosetFamily};
use kloos::moments::{full_verification, sk_via_pless};
use kloos::{Error, Field};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KloosStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Guard = 3,
    Consistency = 4,
    Panic = 5,
}

/// Opaque handle to GF(3^r).
pub struct KloosField {
    field: Field,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> KloosStatus {
    match err {
        Error::Guard { .. } => KloosStatus::Guard,
        Error::Consistency(_) => KloosStatus::Consistency,
        _ => KloosStatus::InvalidArgument,
    }
}

struct Fail(KloosStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(KloosStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any error and converts panics into `Panic`.
fn guarded(body: impl FnOnce() -> Result<(), Fail>) -> KloosStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KloosStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            KloosStatus::Panic
        }
    }
}

unsafe fn field_ref<'a>(field: *const KloosField) -> Result<&'a Field, Fail> {
    field.as_ref().map(|h| &h.field).ok_or_else(|| null("field"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(KloosStatus::Panic, "interior NUL".into()))?;
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn parse_family(name: *const c_char) -> Result<CosetFamily, Fail> {
    if name.is_null() {
        return Err(null("family"));
    }
    let s = CStr::from_ptr(name)
        .to_str()
        .map_err(|_| Fail(KloosStatus::InvalidArgument, "family is not UTF-8".into()))?;
    Ok(s.parse()?)
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String, Fail> {
    serde_json::to_string(v).map_err(|e| Fail(KloosStatus::Panic, e.to_string()))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn kloos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds GF(3^r). `modulus` holds `modulus_len` coefficients, constant term
/// first; pass NULL for the built-in modulus of degree r.
///
/// # Safety
/// `modulus` must point to `modulus_len` readable bytes or be NULL; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_field_new(
    r: u32,
    modulus: *const u8,
    modulus_len: usize,
    out: *mut *mut KloosField,
) -> KloosStatus {
    guarded(|| {
        let m = if modulus.is_null() {
            None
        } else {
            Some(std::slice::from_raw_parts(modulus, modulus_len))
        };
        let field = Field::new(r as usize, m)?;
        write_out(out, Box::into_raw(Box::new(KloosField { field })))
    })
}

/// # Safety
/// `field` must come from [`kloos_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kloos_field_free(field: *mut KloosField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// q = 3^r, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn kloos_field_q(field: *const KloosField) -> u32 {
    field.as_ref().map_or(0, |h| h.field.q())
}

/// Absolute trace of the element with index `x` (Σ c_i 3^i).
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_field_trace(field: *const KloosField, x: u32, out: *mut u8) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        let e = f.element(x)?;
        write_out(out, f.trace(e))
    })
}

/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_field_is_square(field: *const KloosField, x: u32, out: *mut bool) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        let e = f.element(x)?;
        write_out(out, f.is_square(e)?)
    })
}

/// K(λ; a) for the element with index `a`.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_kloosterman(field: *const KloosField, a: u32, out: *mut i64) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        let e = f.element(a)?;
        write_out(out, charsum::kloosterman(f, e)?)
    })
}

/// SK^h as a decimal string.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_sk_moment(field: *const KloosField, h: u32, out: *mut *mut c_char) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        write_string(out, charsum::sk_moment(f, h)?.to_string())
    })
}

/// MK^h as a decimal string.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_mk_moment(field: *const KloosField, h: u32, out: *mut *mut c_char) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        write_string(out, charsum::mk_moment(f, h)?.to_string())
    })
}

/// `{"A":..,"B":..,"N":..}` for a family name such as `"DC2+"`.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_family_constants_json(
    family: *const c_char,
    n: u32,
    q: u64,
    out: *mut *mut c_char,
) -> KloosStatus {
    guarded(|| {
        let fam = parse_family(family)?;
        let c = family_constants(fam, n, q)?;
        write_string(out, to_json(&c)?)
    })
}

/// The moment series recovered from one family's code, as JSON.
///
/// # Safety
/// `field` must be a live handle; `family` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn kloos_sk_via_pless_json(
    field: *const KloosField,
    family: *const c_char,
    n: u32,
    h_max: u32,
    out: *mut *mut c_char,
) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        let fam = parse_family(family)?;
        let tables = SumTables::new(f)?;
        let series = sk_via_pless(fam, n, &tables, h_max)?;
        write_string(out, to_json(&series)?)
    })
}

/// Full verification report as JSON. `*passed` is set when it is non-NULL.
///
/// # Safety
/// `field` must be a live handle; `out` writable; `passed` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn kloos_verify_json(
    field: *const KloosField,
    n_max: u32,
    h_max: u32,
    passed: *mut bool,
    out: *mut *mut c_char,
) -> KloosStatus {
    guarded(|| {
        let f = field_ref(field)?;
        let report = full_verification(f, n_max, h_max)?;
        if !passed.is_null() {
            passed.write(report.passed);
        }
        write_string(out, to_json(&report)?)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kloos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
