//! C ABI over `hmpid`.
//!
//! Every fallible call returns an [`HmpidStatus`]; on failure a message is
//! available from [`hmpid_last_error`] on the same thread. Objects are
//! opaque handles released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hmpid::identify::{certify, IdentifyOptions, Verdict, VerdictKind};
use hmpid::io::{parse_distribution, parse_params, to_json_string, ParamsFile, ResultFile};
use hmpid::{Error, HmpParams, StringDistribution, ToleranceConfig};

/// Slack used when validating user supplied parameters.
const PARAMS_TOL: f64 = 1e-9;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmpidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Probabilities or parameters failed validation.
    Validation = 3,
    /// Malformed JSON or UTF-8.
    Format = 4,
    Numerical = 5,
    /// The verdict does not carry parameters.
    WrongKind = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmpidVerdictKind {
    Hmp = 0,
    NoHmp = 1,
    CannotDecide = 2,
}

pub struct HmpidDistribution(StringDistribution);

pub struct HmpidParams(HmpParams);

pub struct HmpidVerdict(Verdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::from(c"error message contained a NUL byte"));
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> HmpidStatus {
    match e {
        Error::MissingKey(_)
        | Error::NegativeEntry { .. }
        | Error::EntryAboveOne { .. }
        | Error::SumNotOne { .. }
        | Error::Alphabet(_)
        | Error::InvalidParams(_) => HmpidStatus::Validation,
        Error::Format(_) => HmpidStatus::Format,
        Error::DuplicateEigenvalue(..) | Error::RankDeficient(_) | Error::DegenerateY(_) => HmpidStatus::Numerical,
        Error::WrongKind => HmpidStatus::WrongKind,
        _ => HmpidStatus::InvalidArgument,
    }
}

struct Failure(HmpidStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HmpidStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HmpidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HmpidStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HmpidStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(HmpidStatus::Format, e.to_string()))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|e| Failure(HmpidStatus::Format, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hmpid_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hmpid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a distribution from JSON of the form `{"n": .., "probabilities": {..}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hmpid_distribution_from_json(
    json: *const c_char,
    out: *mut *mut HmpidDistribution,
) -> HmpidStatus {
    guard(|| {
        let dist = parse_distribution(text(json)?, &ToleranceConfig::default())?;
        put(out, HmpidDistribution(dist))
    })
}

/// Builds a distribution over strings of length `n` from `2^n` probabilities
/// in lexicographic order.
///
/// # Safety
/// `probs` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_distribution_from_probs(
    n: usize,
    probs: *const f64,
    len: usize,
    out: *mut *mut HmpidDistribution,
) -> HmpidStatus {
    guard(|| {
        let probs = slice(probs, len, "probs")?.to_vec();
        let dist = StringDistribution::from_table(n, probs, &ToleranceConfig::default())?;
        put(out, HmpidDistribution(dist))
    })
}

/// String length of the distribution, or 0 for a null handle.
///
/// # Safety
/// `dist` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hmpid_distribution_n(dist: *const HmpidDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.0.n())
}

/// Copies the `2^n` probabilities into `buf`.
///
/// # Safety
/// `dist` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hmpid_distribution_probs(
    dist: *const HmpidDistribution,
    buf: *mut f64,
    len: usize,
) -> HmpidStatus {
    guard(|| {
        let probs = deref(dist, "distribution")?.0.probs();
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len != probs.len() {
            return Err(Failure(HmpidStatus::InvalidArgument, format!("buffer holds {len}, need {}", probs.len())));
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(probs);
        Ok(())
    })
}

/// # Safety
/// `dist` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hmpid_distribution_free(dist: *mut HmpidDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Builds parameters for `d` hidden states. `transition` is `d*d` and
/// `emission` is `d*2`, both row-major; `initial` has `d` entries.
///
/// # Safety
/// The arrays must have the stated lengths and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_new(
    d: usize,
    transition: *const f64,
    emission: *const f64,
    initial: *const f64,
    out: *mut *mut HmpidParams,
) -> HmpidStatus {
    guard(|| {
        if d == 0 {
            return Err(Failure(HmpidStatus::InvalidArgument, "d must be positive".into()));
        }
        let m: Vec<Vec<f64>> = slice(transition, d * d, "transition")?.chunks(d).map(<[f64]>::to_vec).collect();
        let e: Vec<Vec<f64>> = slice(emission, d * 2, "emission")?.chunks(2).map(<[f64]>::to_vec).collect();
        let pi = slice(initial, d, "initial")?.to_vec();
        put(out, HmpidParams(HmpParams::from_rows(&m, &e, &pi, PARAMS_TOL)?))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_from_json(json: *const c_char, out: *mut *mut HmpidParams) -> HmpidStatus {
    guard(|| put(out, HmpidParams(parse_params(text(json)?, PARAMS_TOL)?)))
}

/// Number of hidden states, or 0 for a null handle.
///
/// # Safety
/// `params` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_states(params: *const HmpidParams) -> usize {
    params.as_ref().map_or(0, |p| p.0.d())
}

/// Copies parameters into row-major buffers sized as in [`hmpid_params_new`].
/// Any output pointer may be null to skip it.
///
/// # Safety
/// `params` must be a live handle and each non-null buffer large enough.
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_get(
    params: *const HmpidParams,
    transition: *mut f64,
    emission: *mut f64,
    initial: *mut f64,
) -> HmpidStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        let d = p.d();
        for i in 0..d {
            if !transition.is_null() {
                for j in 0..d {
                    *transition.add(i * d + j) = p.transition[(i, j)];
                }
            }
            if !emission.is_null() {
                for a in 0..2 {
                    *emission.add(i * 2 + a) = p.emission[(i, a)];
                }
            }
            if !initial.is_null() {
                *initial.add(i) = p.initial[i];
            }
        }
        Ok(())
    })
}

/// # Safety
/// `params` must be a live handle and `out` writable. Free the result with
/// [`hmpid_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_to_json(params: *const HmpidParams, out: *mut *mut c_char) -> HmpidStatus {
    guard(|| {
        let json = to_json_string(&ParamsFile::from_params(&deref(params, "params")?.0))?;
        put_string(out, json)
    })
}

/// # Safety
/// `params` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hmpid_params_free(params: *mut HmpidParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Exact distribution over strings of length `n` generated by `params`.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_simulate(
    params: *const HmpidParams,
    n: usize,
    out: *mut *mut HmpidDistribution,
) -> HmpidStatus {
    guard(|| {
        let dist = deref(params, "params")?.0.full_distribution(n)?;
        put(out, HmpidDistribution(dist))
    })
}

/// Runs identification with default tolerances. `max_states == 0` uses the
/// largest state count the string length supports.
///
/// # Safety
/// `dist` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_identify(
    dist: *const HmpidDistribution,
    max_states: usize,
    paper_literal: bool,
    out: *mut *mut HmpidVerdict,
) -> HmpidStatus {
    guard(|| {
        let opts = IdentifyOptions {
            max_states: (max_states > 0).then_some(max_states),
            paper_literal,
            ..IdentifyOptions::default()
        };
        let verdict = hmpid::identify(&deref(dist, "distribution")?.0, &opts)?;
        put(out, HmpidVerdict(verdict))
    })
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hmpid_verdict_kind(verdict: *const HmpidVerdict) -> HmpidVerdictKind {
    match verdict.as_ref().map(|v| &v.0.kind) {
        Some(VerdictKind::Hmp { .. }) => HmpidVerdictKind::Hmp,
        Some(VerdictKind::NoHmp { .. }) => HmpidVerdictKind::NoHmp,
        _ => HmpidVerdictKind::CannotDecide,
    }
}

/// State count of the verdict: recovered states, the largest count tested,
/// or the count at which the search stopped.
///
/// # Safety
/// `verdict` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hmpid_verdict_states(verdict: *const HmpidVerdict) -> usize {
    verdict.as_ref().map_or(0, |v| v.0.states())
}

/// Copies the recovered parameters into a new handle.
///
/// # Safety
/// `verdict` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_verdict_params(verdict: *const HmpidVerdict, out: *mut *mut HmpidParams) -> HmpidStatus {
    guard(|| {
        let params = deref(verdict, "verdict")?.0.params().cloned().ok_or(Error::WrongKind)?;
        put(out, HmpidParams(params))
    })
}

/// Largest absolute difference between the table and the recovered model.
///
/// # Safety
/// Both handles must be live and `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_certify(
    dist: *const HmpidDistribution,
    verdict: *const HmpidVerdict,
    residual: *mut f64,
) -> HmpidStatus {
    guard(|| {
        let report = certify(&deref(dist, "distribution")?.0, &deref(verdict, "verdict")?.0)?;
        if residual.is_null() {
            return Err(null("residual"));
        }
        *residual = report.max_residual;
        Ok(())
    })
}

/// Verdict with its trace as JSON. Free the result with [`hmpid_string_free`].
///
/// # Safety
/// `verdict` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hmpid_verdict_to_json(verdict: *const HmpidVerdict, out: *mut *mut c_char) -> HmpidStatus {
    guard(|| {
        let json = to_json_string(&ResultFile::new(&deref(verdict, "verdict")?.0, None))?;
        put_string(out, json)
    })
}

/// # Safety
/// `verdict` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hmpid_verdict_free(verdict: *mut HmpidVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}
