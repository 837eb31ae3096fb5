//! C ABI over the ckde toolkit: pairing parameter handles, scenario runs,
//! transcript verification and the benchmark report, for bindings from
//! other languages.
//!
//! Conventions: every function returns a [`CkdeStatus`]; results come back
//! through out-pointers. Returned strings are NUL-terminated, UTF-8, owned
//! by Rust, and must be released with [`ckde_string_free`]. Parameter
//! handles are opaque and released with [`ckde_params_free`]. A
//! human-readable description of the most recent failure on the calling
//! thread is available via [`ckde_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ckde::bench::{bench_run, BenchConfig};
use ckde::field::biguint_from_hex;
use ckde::pairing::PairingParams;
use ckde::simnet::{run_scenario, verify_transcript, ScenarioConfig, SimError};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkdeStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was structurally invalid (bad hex, bad sizes).
    InvalidArgument = 3,
    /// A scenario or parameter configuration was rejected.
    ConfigError = 4,
    /// A cryptographic operation failed internally.
    CryptoError = 5,
    /// A transcript failed offline verification.
    VerifyFailed = 6,
}

/// Opaque handle to a validated pairing parameter set.
pub struct CkdeParams {
    inner: PairingParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let fallback = "error message contained NUL";
    let stored = CString::new(message).unwrap_or_else(|_| CString::new(fallback).unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn fail(status: CkdeStatus, message: impl ToString) -> CkdeStatus {
    set_last_error(message.to_string());
    status
}

/// Most recent error on this thread, or NULL when no call has failed yet.
/// The pointer is valid until the next failing call on the same thread;
/// do not free it.
#[no_mangle]
pub extern "C" fn ckde_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

unsafe fn read_utf8<'a>(pointer: *const c_char) -> Result<&'a str, CkdeStatus> {
    if pointer.is_null() {
        return Err(CkdeStatus::NullPointer);
    }
    CStr::from_ptr(pointer)
        .to_str()
        .map_err(|_| CkdeStatus::InvalidUtf8)
}

fn give_string(text: String, out: *mut *mut c_char) -> CkdeStatus {
    match CString::new(text) {
        Ok(owned) => {
            unsafe { *out = owned.into_raw() };
            CkdeStatus::Ok
        }
        Err(e) => fail(CkdeStatus::InvalidArgument, e),
    }
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `text` must be a pointer previously returned through one of this
/// library's out-parameters and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckde_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Deterministically searches for pairing parameters with a `bits`-bit
/// prime and writes a new handle to `out_params`.
///
/// # Safety
/// `out_params` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ckde_params_generate(
    bits: u64,
    seed: u64,
    out_params: *mut *mut CkdeParams,
) -> CkdeStatus {
    if out_params.is_null() {
        return fail(CkdeStatus::NullPointer, "out_params is NULL");
    }
    match PairingParams::generate(bits, seed) {
        Ok(inner) => {
            *out_params = Box::into_raw(Box::new(CkdeParams { inner }));
            CkdeStatus::Ok
        }
        Err(e) => fail(CkdeStatus::ConfigError, e),
    }
}

/// Builds and validates parameters from lowercase hex p, q, r with
/// p + 1 = 12*q*r.
///
/// # Safety
/// All pointers must be valid; the strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ckde_params_from_parts(
    p_hex: *const c_char,
    q_hex: *const c_char,
    r_hex: *const c_char,
    out_params: *mut *mut CkdeParams,
) -> CkdeStatus {
    if out_params.is_null() {
        return fail(CkdeStatus::NullPointer, "out_params is NULL");
    }
    let parse = |raw: *const c_char| -> Result<num_bigint::BigUint, CkdeStatus> {
        let text = read_utf8(raw)?;
        biguint_from_hex(text).map_err(|e| fail(CkdeStatus::InvalidArgument, e))
    };
    let (p, q, r) = match (parse(p_hex), parse(q_hex), parse(r_hex)) {
        (Ok(p), Ok(q), Ok(r)) => (p, q, r),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    match PairingParams::from_parts(p, q, r) {
        Ok(inner) => {
            *out_params = Box::into_raw(Box::new(CkdeParams { inner }));
            CkdeStatus::Ok
        }
        Err(e) => fail(CkdeStatus::ConfigError, e),
    }
}

/// Writes a JSON description (p, q, r, cofactor, curve, generator) of the
/// parameter set to `out_json`.
///
/// # Safety
/// `params` must be a live handle from this library; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ckde_params_describe(
    params: *const CkdeParams,
    out_json: *mut *mut c_char,
) -> CkdeStatus {
    if params.is_null() || out_json.is_null() {
        return fail(CkdeStatus::NullPointer, "params or out_json is NULL");
    }
    let inner = &(*params).inner;
    let description = serde_json::json!({
        "p": format!("{:x}", inner.field().modulus()),
        "q": format!("{:x}", inner.subgroup_order()),
        "r": format!("{:x}", inner.aux_factor()),
        "cofactor": format!("{:x}", inner.cofactor()),
        "curve": inner.curve().encode(),
        "generator": inner.generator().encode(),
    });
    give_string(description.to_string(), out_json)
}

/// Releases a parameter handle. NULL is ignored.
///
/// # Safety
/// `params` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ckde_params_free(params: *mut CkdeParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Runs a scenario from its JSON config and writes the JSON-lines
/// transcript to `out_transcript`. Identical configs produce byte-identical
/// transcripts.
///
/// # Safety
/// `config_json` must be NUL-terminated; `out_transcript` writable.
#[no_mangle]
pub unsafe extern "C" fn ckde_scenario_run(
    config_json: *const c_char,
    out_transcript: *mut *mut c_char,
) -> CkdeStatus {
    if out_transcript.is_null() {
        return fail(CkdeStatus::NullPointer, "out_transcript is NULL");
    }
    let text = match read_utf8(config_json) {
        Ok(text) => text,
        Err(status) => return fail(status, "config_json unreadable"),
    };
    let config = match ScenarioConfig::from_json(text) {
        Ok(config) => config,
        Err(e) => return fail(CkdeStatus::ConfigError, e),
    };
    match run_scenario(&config) {
        Ok(transcript) => give_string(transcript.to_jsonl(), out_transcript),
        Err(e @ SimError::ConfigInvalid { .. }) => fail(CkdeStatus::ConfigError, e),
        Err(e) => fail(CkdeStatus::CryptoError, e),
    }
}

/// Re-verifies every recorded check of a JSON-lines transcript.
/// Returns Ok when all checks hold, VerifyFailed otherwise.
///
/// # Safety
/// `transcript` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ckde_transcript_verify(transcript: *const c_char) -> CkdeStatus {
    let text = match read_utf8(transcript) {
        Ok(text) => text,
        Err(status) => return fail(status, "transcript unreadable"),
    };
    match verify_transcript(text) {
        Ok(_) => CkdeStatus::Ok,
        Err(e @ (SimError::ReplayMismatch { .. } | SimError::MalformedTranscript { .. })) => {
            fail(CkdeStatus::VerifyFailed, e)
        }
        Err(e) => fail(CkdeStatus::CryptoError, e),
    }
}

/// Times the four comparison rows (DES, Signature, IDEA, improved) and
/// writes the CSV report to `out_csv`. `iterations` must be at least 30.
///
/// # Safety
/// `out_csv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckde_bench_csv(
    iterations: u32,
    seed: u64,
    out_csv: *mut *mut c_char,
) -> CkdeStatus {
    if out_csv.is_null() {
        return fail(CkdeStatus::NullPointer, "out_csv is NULL");
    }
    let config = BenchConfig {
        iterations: iterations as usize,
        seed,
        ..BenchConfig::default()
    };
    match bench_run(&config) {
        Ok(report) => give_string(report.to_csv(), out_csv),
        Err(e) => fail(CkdeStatus::InvalidArgument, e),
    }
}
