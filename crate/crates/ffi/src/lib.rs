//! C interface to the solver, verifier and prime classification.
//!
//! Every fallible function returns an [`ObfError`] code and writes its result
//! through an out-pointer. After a failure, [`obf_last_error`] describes what
//! went wrong on the calling thread. Certificates are opaque handles released
//! with [`obf_certificate_free`]; strings handed out by the library are
//! released with [`obf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use obf_core::certfile;
use obf_core::numtheory::{classify_prime, is_prime};
use obf_core::solver::{solve, verify_certificate, SolverConfig, Verdict};
use obf_core::{Certificate, CycleType, ProblemSpec, Status};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObfError {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ParseFailed = 4,
    SolverFailed = 5,
    Panicked = 6,
}

/// Outcome recorded in a certificate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObfStatus {
    Solved = 0,
    NoSolution = 1,
    Unsupported = 2,
}

/// Opaque certificate handle.
pub struct ObfCertificate {
    inner: Certificate,
}

/// Classification of an odd prime. Fields guarded by a `has_` flag are
/// meaningful only when that flag is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ObfClassification {
    pub p: u64,
    pub residue_mod_6: u8,
    pub residue_mod_8: u8,
    pub has_cube_status: bool,
    pub two_is_cube: bool,
    pub three_is_cube: bool,
    pub six_is_cube: bool,
    pub has_t_signature: bool,
    pub t_signature: [u8; 2],
    pub has_quartic_run_witness: bool,
    pub quartic_run_witness: u64,
    pub has_mixed_run_length: bool,
    pub mixed_run_length: u64,
    pub mixed_class: bool,
    pub pm123_class: bool,
    pub pm134_class: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(code: ObfError, msg: impl Into<String>) -> ObfError {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
    code
}

fn guard(body: impl FnOnce() -> ObfError) -> ObfError {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => set_error(ObfError::Panicked, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ObfError> {
    if s.is_null() {
        return Err(set_error(ObfError::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| set_error(ObfError::InvalidUtf8, "string is not UTF-8"))
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn obf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Classifies the odd prime `p`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `ObfClassification`.
#[no_mangle]
pub unsafe extern "C" fn obf_classify(p: u64, out: *mut ObfClassification) -> ObfError {
    guard(|| {
        if out.is_null() {
            return set_error(ObfError::NullPointer, "null output pointer");
        }
        if p < 3 || !is_prime(p) {
            return set_error(
                ObfError::InvalidArgument,
                format!("{p} is not an odd prime"),
            );
        }
        let c = match classify_prime(p) {
            Ok(c) => c,
            Err(e) => return set_error(ObfError::InvalidArgument, e.to_string()),
        };
        let cube = c.cube_status;
        *out = ObfClassification {
            p,
            residue_mod_6: c.residue_mod_6 as u8,
            residue_mod_8: c.residue_mod_8 as u8,
            has_cube_status: cube.is_some(),
            two_is_cube: cube.is_some_and(|s| s.two),
            three_is_cube: cube.is_some_and(|s| s.three),
            six_is_cube: cube.is_some_and(|s| s.six),
            has_t_signature: c.t_signature.is_some(),
            t_signature: c.t_signature.map_or([0, 0], |(a, b)| [a, b]),
            has_quartic_run_witness: c.quartic_run_witness.is_some(),
            quartic_run_witness: c.quartic_run_witness.unwrap_or(0),
            has_mixed_run_length: c.mixed_run_length.is_some(),
            mixed_run_length: c.mixed_run_length.unwrap_or(0),
            mixed_class: c.mixed_class,
            pm123_class: c.is_pm123_class(),
            pm134_class: c.is_pm134_class(),
        };
        ObfError::Ok
    })
}

/// Solves the Oberwolfach problem for the cycle lengths `cycles[0..len]`.
/// A `budget` of 0 selects the default search budget.
///
/// # Safety
/// `cycles` must point to `len` readable integers and `out` to a writable
/// handle slot. On success `*out` owns a new certificate.
#[no_mangle]
pub unsafe extern "C" fn obf_solve_op(
    cycles: *const u32,
    len: usize,
    budget: u64,
    out: *mut *mut ObfCertificate,
) -> ObfError {
    guard(|| {
        if cycles.is_null() || out.is_null() {
            return set_error(ObfError::NullPointer, "null argument");
        }
        let lengths = std::slice::from_raw_parts(cycles, len).to_vec();
        let f = match CycleType::new(lengths) {
            Ok(f) => f,
            Err(e) => return set_error(ObfError::InvalidArgument, e.to_string()),
        };
        let mut config = SolverConfig::default();
        if budget > 0 {
            config.budget = budget;
        }
        match solve(&ProblemSpec::op(f), &config) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ObfCertificate { inner }));
                ObfError::Ok
            }
            Err(e) => set_error(ObfError::SolverFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `cert` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn obf_certificate_status(
    cert: *const ObfCertificate,
    out: *mut ObfStatus,
) -> ObfError {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return set_error(ObfError::NullPointer, "null argument");
        }
        *out = match (*cert).inner.status {
            Status::Solved => ObfStatus::Solved,
            Status::NoSolution(_) => ObfStatus::NoSolution,
            Status::Unsupported(_) => ObfStatus::Unsupported,
        };
        ObfError::Ok
    })
}

/// Serialises a certificate to the text file format. The string written to
/// `*out` must be released with [`obf_string_free`].
///
/// # Safety
/// `cert` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn obf_certificate_to_json(
    cert: *const ObfCertificate,
    out: *mut *mut c_char,
) -> ObfError {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return set_error(ObfError::NullPointer, "null argument");
        }
        match CString::new(certfile::emit(&(*cert).inner)) {
            Ok(s) => {
                *out = s.into_raw();
                ObfError::Ok
            }
            Err(_) => set_error(ObfError::InvalidArgument, "certificate text contains NUL"),
        }
    })
}

/// Parses certificate text into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn obf_certificate_from_json(
    json: *const c_char,
    out: *mut *mut ObfCertificate,
) -> ObfError {
    guard(|| {
        if out.is_null() {
            return set_error(ObfError::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match certfile::parse(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ObfCertificate { inner }));
                ObfError::Ok
            }
            Err(e) => set_error(ObfError::ParseFailed, e.to_string()),
        }
    })
}

unsafe fn write_verdict(verdict: Verdict, valid: *mut bool) -> ObfError {
    *valid = verdict.is_valid();
    if let Verdict::Invalid { check, detail } = verdict {
        set_error(ObfError::Ok, format!("{check}: {detail}"));
    }
    ObfError::Ok
}

/// Checks a certificate. `*valid` receives the verdict; when it is false,
/// [`obf_last_error`] names the failing check.
///
/// # Safety
/// `cert` must be a live handle and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn obf_verify(cert: *const ObfCertificate, valid: *mut bool) -> ObfError {
    guard(|| {
        if cert.is_null() || valid.is_null() {
            return set_error(ObfError::NullPointer, "null argument");
        }
        write_verdict(verify_certificate(&(*cert).inner), valid)
    })
}

/// Parses and checks certificate text in one call.
///
/// # Safety
/// `json` must be a NUL-terminated string and `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn obf_verify_json(json: *const c_char, valid: *mut bool) -> ObfError {
    guard(|| {
        if valid.is_null() {
            return set_error(ObfError::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match certfile::parse(text) {
            Ok(cert) => write_verdict(verify_certificate(&cert), valid),
            Err(e) => set_error(ObfError::ParseFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obf_certificate_free(cert: *mut ObfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn classify_writes_fields() {
        let mut c = ObfClassification::default();
        assert_eq!(unsafe { obf_classify(97, &mut c) }, ObfError::Ok);
        assert!(c.pm134_class && c.mixed_class && c.has_t_signature);
        assert_eq!(c.t_signature, [5, 1]);
        assert_eq!(
            unsafe { obf_classify(91, &mut c) },
            ObfError::InvalidArgument
        );
        assert_eq!(
            unsafe { obf_classify(7, ptr::null_mut()) },
            ObfError::NullPointer
        );
    }

    #[test]
    fn last_error_is_per_call() {
        let mut c = ObfClassification::default();
        unsafe { obf_classify(9, &mut c) };
        let msg = unsafe { CStr::from_ptr(obf_last_error()) };
        assert!(msg.to_str().unwrap().contains("9 is not an odd prime"));
    }
}
