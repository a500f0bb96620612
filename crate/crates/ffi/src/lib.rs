//! C interface. Handles are opaque; every call returns a `CcrStatus`, and
//! on failure `ccr_last_error` describes the problem. Strings returned
//! through out-parameters are owned by the caller and released with
//! `ccr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ccring::{AmbientParams, Error, FactorData, FieldCtx};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotSelfPaired = 3,
    Parse = 4,
    TooLarge = 5,
    Internal = 6,
}

/// Factor data of one ambient ring (F_{p^m} + uF_{p^m})[x]/(x^N - λ).
pub struct CcrAmbient {
    fd: FactorData,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CcrStatus {
    match e {
        Error::NotSelfPairedLambda => CcrStatus::NotSelfPaired,
        Error::Parse(_) => CcrStatus::Parse,
        Error::TooLarge(_) => CcrStatus::TooLarge,
        _ => CcrStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CcrStatus, String)>) -> CcrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcrStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            CcrStatus::Internal
        }
    }
}

fn lib(e: Error) -> (CcrStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CcrStatus, String) {
    (CcrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (CcrStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c =
        CString::new(s).map_err(|_| (CcrStatus::Internal, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a>(h: *const CcrAmbient) -> Result<&'a CcrAmbient, (CcrStatus, String)> {
    h.as_ref().ok_or_else(|| null("handle"))
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ccr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the ring for p, m, s, n and λ. `lambda` holds m little-endian
/// coefficients over F_p; `modulus` is m + 1 coefficients of a monic
/// irreducible, or null for the default.
///
/// # Safety
/// `lambda` must point to `m` values, `modulus` (if non-null) to `m + 1`,
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_ambient_new(
    p: u64,
    m: u32,
    s: u32,
    n: u64,
    lambda: *const u32,
    modulus: *const u32,
    out: *mut *mut CcrAmbient,
) -> CcrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if lambda.is_null() {
            return Err(null("lambda"));
        }
        let modulus =
            (!modulus.is_null()).then(|| std::slice::from_raw_parts(modulus, m as usize + 1));
        let k = FieldCtx::new(p, m, modulus).map_err(lib)?;
        let l = k
            .from_coeffs(std::slice::from_raw_parts(lambda, m as usize))
            .map_err(lib)?;
        let params = AmbientParams::new(k, s, n, l).map_err(lib)?;
        let fd = FactorData::build(&params).map_err(lib)?;
        *out = Box::into_raw(Box::new(CcrAmbient { fd }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from `ccr_ambient_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ccr_ambient_free(h: *mut CcrAmbient) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of irreducible factors r.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_num_factors(h: *const CcrAmbient, out: *mut usize) -> CcrStatus {
    guard(|| {
        let h = handle(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = h.fd.r();
        Ok(())
    })
}

/// Number of codes, as a decimal string.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_count_codes(h: *const CcrAmbient, out: *mut *mut c_char) -> CcrStatus {
    guard(|| {
        let h = handle(h)?;
        write_string(out, ccring::count_codes(&h.fd).to_string())
    })
}

/// Number of self-dual codes for λ = nu = ±1, as a decimal string.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_count_self_dual(
    h: *const CcrAmbient,
    nu: i8,
    out: *mut *mut c_char,
) -> CcrStatus {
    guard(|| {
        let h = handle(h)?;
        let c = ccring::count_self_dual(&h.fd, nu).map_err(lib)?;
        write_string(out, c.to_string())
    })
}

/// Factors, idempotents, pairing and total count as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_info_json(h: *const CcrAmbient, out: *mut *mut c_char) -> CcrStatus {
    guard(|| {
        let h = handle(h)?;
        write_string(out, ccring::json::factor_data_to_json(&h.fd).to_string())
    })
}

/// Dual of a code given as JSON (the format `ccring enumerate` prints).
///
/// # Safety
/// `code_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ccr_dual_json(
    code_json: *const c_char,
    out: *mut *mut c_char,
) -> CcrStatus {
    guard(|| {
        if code_json.is_null() {
            return Err(null("code_json"));
        }
        let text = CStr::from_ptr(code_json)
            .to_str()
            .map_err(|_| (CcrStatus::Parse, "not UTF-8".to_string()))?;
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| (CcrStatus::Parse, e.to_string()))?;
        let params = ccring::json::code_params_from_json(&v).map_err(lib)?;
        let fd = FactorData::build(&params).map_err(lib)?;
        let code = ccring::json::code_from_json(&fd, &v).map_err(lib)?;
        let dual = ccring::dual_code(&fd, &code).map_err(lib)?;
        write_string(
            out,
            ccring::json::dual_to_json(&dual).map_err(lib)?.to_string(),
        )
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ccr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
