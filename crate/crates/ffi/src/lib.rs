//! C ABI for `bdcodes`.
//!
//! Every function returns a [`BdStatus`]. On failure a message is stored in
//! thread-local storage and can be read with [`bd_last_error_message`].
//! Codes are passed as opaque [`BdCode`] handles released with
//! [`bd_code_free`]; strings returned by the library are released with
//! [`bd_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bdcodes::bindihedral::{multiplicity, Irrep};
use bdcodes::dickemap::{multiqubit_kl_check, Labeling, MultiqubitCode, VerifyMode};
use bdcodes::families::{code1, code2, predicted_length};
use bdcodes::format::CodeJson;
use bdcodes::klengine::{count_conditions, count_conditions_closed, kl_check_full};
use bdcodes::searcher::{search_code, SearchConfig};
use bdcodes::{Error, HalfInt};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdStatus {
    Ok = 0,
    InvalidInput = 1,
    NullPointer = 2,
    NotFound = 3,
    VerifyFailed = 4,
    ResourceLimit = 5,
    Internal = 6,
    Panic = 7,
}

/// `mode` values for [`bd_code_verify`].
pub const BD_VERIFY_SPIN: u32 = 0;
pub const BD_VERIFY_DENSE: u32 = 1;
pub const BD_VERIFY_SYMMETRIC: u32 = 2;

/// Opaque code handle.
pub struct BdCode {
    code: MultiqubitCode,
    d: u32,
    residuals: BTreeMap<String, f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BdStatus {
    match e {
        Error::NotFound { .. } => BdStatus::NotFound,
        Error::NotTransversal { .. } => BdStatus::VerifyFailed,
        Error::ResourceLimit(_) => BdStatus::ResourceLimit,
        Error::Inconsistency(_) | Error::Io(_) => BdStatus::Internal,
        _ => BdStatus::InvalidInput,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), BdStatusError>) -> BdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BdStatus::Ok
        }
        Ok(Err(BdStatusError(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside bdcodes".into());
            BdStatus::Panic
        }
    }
}

struct BdStatusError(BdStatus, String);

impl From<Error> for BdStatusError {
    fn from(e: Error) -> Self {
        BdStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> BdStatusError {
    BdStatusError(BdStatus::NullPointer, format!("{what} is null"))
}

fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, BdStatusError> {
    // SAFETY: caller guarantees `p` is either null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn handle<'a>(p: *const BdCode) -> Result<&'a BdCode, BdStatusError> {
    // SAFETY: caller passes a handle obtained from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null("code handle"))
}

fn boxed(code: MultiqubitCode, d: u32, residuals: BTreeMap<String, f64>) -> *mut BdCode {
    Box::into_raw(Box::new(BdCode { code, d, residuals }))
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Reduced condition counts by summation.
#[no_mangle]
pub extern "C" fn bd_count_conditions(b: u32, a: u32, d: u32, on_diag: *mut u64, off_diag: *mut u64) -> BdStatus {
    guarded(|| {
        let count = count_conditions(Irrep::new(b, a)?, d)?;
        *out(on_diag, "on_diag")? = count.on_diag;
        *out(off_diag, "off_diag")? = count.off_diag;
        Ok(())
    })
}

/// Total reduced condition count from the closed form.
#[no_mangle]
pub extern "C" fn bd_count_conditions_closed(b: u32, a: u32, d: u32, nu: *mut u64) -> BdStatus {
    guarded(|| {
        *out(nu, "nu")? = count_conditions_closed(Irrep::new(b, a)?, d)?;
        Ok(())
    })
}

/// Predicted code length `n` at odd distance `d`.
#[no_mangle]
pub extern "C" fn bd_predicted_length(b: u32, a: u32, d: u32, n: *mut usize) -> BdStatus {
    guarded(|| {
        *out(n, "n")? = predicted_length(Irrep::new(b, a)?, d)?.n;
        Ok(())
    })
}

/// Multiplicity of `delta_a` in spin `twice_j / 2`.
#[no_mangle]
pub extern "C" fn bd_multiplicity(b: u32, a: u32, twice_j: i64, mu: *mut usize) -> BdStatus {
    guarded(|| {
        if twice_j < 0 {
            return Err(Error::InvalidInput(format!("negative spin 2j = {twice_j}")).into());
        }
        *out(mu, "mu")? = multiplicity(Irrep::new(b, a)?, HalfInt::from_twice(twice_j));
        Ok(())
    })
}

/// The `((2b+3, 2, 3))` closed-form code.
#[no_mangle]
pub extern "C" fn bd_code_family1(b: u32, code: *mut *mut BdCode) -> BdStatus {
    guarded(|| {
        let slot = out(code, "code")?;
        let (c, params) = code1(b)?;
        *slot = boxed(c, params.d, BTreeMap::new());
        Ok(())
    })
}

/// The `((2^r+3, 2, 3, Q^(r)))` code.
#[no_mangle]
pub extern "C" fn bd_code_family2(r: u32, code: *mut *mut BdCode) -> BdStatus {
    guarded(|| {
        let slot = out(code, "code")?;
        let (c, params) = code2(r)?;
        *slot = boxed(c, params.d, BTreeMap::new());
        Ok(())
    })
}

/// Numerical search at the predicted spin. `BD_STATUS_NOT_FOUND` when no
/// restart reaches the `1e-12` threshold.
#[no_mangle]
pub extern "C" fn bd_code_search(b: u32, a: u32, d: u32, restarts: usize, seed: u64, code: *mut *mut BdCode) -> BdStatus {
    guarded(|| {
        let slot = out(code, "code")?;
        let cfg = SearchConfig { restarts, rng_seed: seed, ..SearchConfig::default() };
        let r = search_code(Irrep::new(b, a)?, d, &cfg)?;
        let residuals = BTreeMap::from([
            ("search".to_string(), r.solution.residual),
            ("spin_kl".to_string(), r.report.max_residual),
        ]);
        *slot = boxed(r.code, d, residuals);
        Ok(())
    })
}

/// Parses a code JSON document.
#[no_mangle]
pub extern "C" fn bd_code_from_json(json: *const c_char, code: *mut *mut BdCode) -> BdStatus {
    guarded(|| {
        let slot = out(code, "code")?;
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: non-null and nul-terminated per the contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| BdStatusError(BdStatus::InvalidInput, "json is not utf-8".into()))?;
        let parsed = CodeJson::from_json_str(text)?;
        let c = parsed.to_code()?;
        *slot = boxed(c, parsed.d, parsed.residuals);
        Ok(())
    })
}

/// Serializes a code; release the string with [`bd_string_free`].
#[no_mangle]
pub extern "C" fn bd_code_to_json(code: *const BdCode, json: *mut *mut c_char) -> BdStatus {
    guarded(|| {
        let h = handle(code)?;
        let slot = out(json, "json")?;
        let text = CodeJson::from_code(&h.code, h.d, h.residuals.clone())?.to_json_string()?;
        *slot = CString::new(text).expect("json has no nul bytes").into_raw();
        Ok(())
    })
}

/// Number of physical qubits.
#[no_mangle]
pub extern "C" fn bd_code_qubits(code: *const BdCode, n: *mut usize) -> BdStatus {
    guarded(|| {
        *out(n, "n")? = handle(code)?.code.n();
        Ok(())
    })
}

/// Declared distance.
#[no_mangle]
pub extern "C" fn bd_code_distance(code: *const BdCode, d: *mut u32) -> BdStatus {
    guarded(|| {
        *out(d, "d")? = handle(code)?.d;
        Ok(())
    })
}

/// Writes the `|0>` amplitudes on Dicke weights `0..=n` (mirrored
/// labeling) into `buf`, which must hold `n + 1` doubles.
#[no_mangle]
pub extern "C" fn bd_code_amplitudes(code: *const BdCode, buf: *mut f64, len: usize) -> BdStatus {
    guarded(|| {
        let h = handle(code)?;
        let n = h.code.n();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: len }.into());
        }
        // SAFETY: non-null and valid for `len` writes per the contract.
        let dst = unsafe { std::slice::from_raw_parts_mut(buf, len) };
        let (zero, _) = h.code.relabeled(Labeling::Mirrored).dicke_vectors();
        dst.copy_from_slice(&zero);
        Ok(())
    })
}

/// Knill-Laflamme check at distance `d`; `mode` is one of the
/// `BD_VERIFY_*` constants. `BD_STATUS_OK` with `*pass = 0`
/// means the check ran and failed.
#[no_mangle]
pub extern "C" fn bd_code_verify(
    code: *const BdCode,
    d: u32,
    mode: u32,
    tolerance: f64,
    max_residual: *mut f64,
    pass: *mut bool,
) -> BdStatus {
    guarded(|| {
        let h = handle(code)?;
        let report = match mode {
            BD_VERIFY_SPIN => kl_check_full(&h.code.to_spin_code()?, d, tolerance)?,
            BD_VERIFY_DENSE => multiqubit_kl_check(&h.code, d, VerifyMode::Dense, tolerance)?,
            BD_VERIFY_SYMMETRIC => multiqubit_kl_check(&h.code, d, VerifyMode::Symmetric, tolerance)?,
            other => return Err(Error::InvalidInput(format!("unknown verify mode {other}")).into()),
        };
        *out(max_residual, "max_residual")? = report.max_residual;
        *out(pass, "pass")? = report.pass;
        Ok(())
    })
}

/// Releases a handle; null is ignored.
#[no_mangle]
pub extern "C" fn bd_code_free(code: *mut BdCode) {
    if !code.is_null() {
        // SAFETY: obtained from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Releases a string returned by the library; null is ignored.
#[no_mangle]
pub extern "C" fn bd_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: obtained from CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
