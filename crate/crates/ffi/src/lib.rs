//! C interface to the propdel solvers.
//!
//! Profiles are opaque handles created by [`pid_profile_parse`] and released
//! with [`pid_profile_free`]. Every fallible function returns a [`PidStatus`];
//! on failure [`pid_last_error`] describes the problem. Result documents are
//! the same JSON the command-line tool prints, returned as strings the caller
//! releases with [`pid_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use propdel::format::parse_instance;
use propdel::matching::find_minimal_obstruction;
use propdel::mindel::{solve3_with, SolverOptions};
use propdel::oracle::{check_solution, solve_exhaustive, Solution};
use propdel::report::{ResultDocument, Statistics, Status};
use propdel::{Item, ItemSet, Outcome, PidError, Profile};

/// Result codes. Zero is success; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    Unsupported = 5,
    Panic = 6,
}

impl From<&PidError> for PidStatus {
    fn from(e: &PidError) -> Self {
        match e {
            PidError::Parse { .. } => PidStatus::ParseError,
            PidError::InstanceTooLarge { .. } | PidError::WrongAgentCount { .. } => {
                PidStatus::Unsupported
            }
            _ => PidStatus::InvalidInput,
        }
    }
}

/// An owned preference profile with an optional budget from its `k` line.
pub struct PidProfile {
    profile: Profile,
    k: Option<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("NUL bytes were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn fail(status: PidStatus, message: impl Into<String>) -> PidStatus {
    set_error(message);
    status
}

fn from_error(e: PidError) -> PidStatus {
    let status = PidStatus::from(&e);
    fail(status, e.to_string())
}

/// Runs `body`, converting panics into [`PidStatus::Panic`].
fn guard(body: impl FnOnce() -> PidStatus) -> PidStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(PidStatus::Panic, "internal panic"))
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Writes `doc` to `out_json` if the caller asked for it.
///
/// # Safety
/// `out_json` is null or valid for writes.
unsafe fn emit(doc: &ResultDocument, out_json: *mut *mut c_char) {
    if !out_json.is_null() {
        *out_json = into_c_string(doc.to_json());
    }
}

/// Parses an instance in the `pid 1` text format.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is valid for writes. On success
/// `*out` receives a handle to release with [`pid_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn pid_profile_parse(
    text: *const c_char,
    out: *mut *mut PidProfile,
) -> PidStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(PidStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(PidStatus::InvalidUtf8, "instance text is not UTF-8");
        };
        match parse_instance(text) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(PidProfile {
                    profile: inst.profile,
                    k: inst.k,
                }));
                PidStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a profile. Null is ignored.
///
/// # Safety
/// `profile` is null or a handle from [`pid_profile_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pid_profile_free(profile: *mut PidProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `profile` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pid_profile_agents(profile: *const PidProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.profile.n_agents())
}

/// Number of items, or 0 for a null handle.
///
/// # Safety
/// `profile` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pid_profile_items(profile: *const PidProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.profile.n_items())
}

/// Decides whether a proportional allocation exists.
///
/// `*proportional` receives the answer. If `out_json` is not null it receives
/// the result document with either an allocation or an obstruction
/// certificate.
///
/// # Safety
/// `profile` is a live handle, `proportional` is valid for writes and
/// `out_json` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pid_check(
    profile: *const PidProfile,
    proportional: *mut bool,
    out_json: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), proportional.is_null()) else {
            return fail(PidStatus::NullPointer, "null argument");
        };
        let p = &p.profile;
        let doc = if p.n_items() == 0 {
            *proportional = true;
            ResultDocument::new("check", Status::Proportional, p)
                .with_allocation(p, &Default::default())
        } else {
            match find_minimal_obstruction(p) {
                Ok(Outcome::Allocation(a)) => {
                    *proportional = true;
                    ResultDocument::new("check", Status::Proportional, p).with_allocation(p, &a)
                }
                Ok(Outcome::Obstruction(cert)) => {
                    *proportional = false;
                    ResultDocument::new("check", Status::Obstructed, p).with_certificate(p, &cert)
                }
                Err(e) => return from_error(e),
            }
        };
        emit(&doc, out_json);
        PidStatus::Ok
    })
}

fn solved_document(
    p: &Profile,
    s: &Solution,
    method: &'static str,
    k: Option<usize>,
) -> Result<ResultDocument, PidError> {
    let mut doc = ResultDocument::new("solve", Status::Solved, p)
        .with_deleted(&s.deleted)
        .with_allocation(&p.delete_items(&s.deleted)?, &s.allocation);
    doc.method = Some(method);
    doc.k = k;
    doc.min_size = Some(s.size());
    doc.decision = k.map(|k| s.size() <= k);
    Ok(doc)
}

/// Minimum deletion for three agents with the memoized polynomial solver.
///
/// A negative `k` falls back to the instance's `k` line, if any. With a
/// budget the document carries the decision `min_size <= k`. `memoize`
/// toggles reuse of equivalent calls.
///
/// # Safety
/// `profile` is a live handle, `min_size` is valid for writes and `out_json`
/// is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pid_solve_three(
    profile: *const PidProfile,
    k: i64,
    memoize: bool,
    min_size: *mut usize,
    out_json: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), min_size.is_null()) else {
            return fail(PidStatus::NullPointer, "null argument");
        };
        let k = usize::try_from(k).ok().or(p.k);
        let options = SolverOptions {
            memoize,
            ..SolverOptions::default()
        };
        let outcome = match solve3_with(&p.profile, k, options) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        let mut doc = match solved_document(&p.profile, &outcome.solution, "three", k) {
            Ok(d) => d,
            Err(e) => return from_error(e),
        };
        doc.stats = Some(Statistics::from(outcome.stats));
        *min_size = outcome.solution.size();
        emit(&doc, out_json);
        PidStatus::Ok
    })
}

/// Minimum deletion by exhaustive enumeration, for any number of agents and
/// at most 20 items.
///
/// # Safety
/// As for [`pid_solve_three`].
#[no_mangle]
pub unsafe extern "C" fn pid_solve_exhaustive(
    profile: *const PidProfile,
    min_size: *mut usize,
    out_json: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), min_size.is_null()) else {
            return fail(PidStatus::NullPointer, "null argument");
        };
        let doc = solve_exhaustive(&p.profile)
            .and_then(|s| solved_document(&p.profile, &s, "brute", p.k).map(|d| (s.size(), d)));
        match doc {
            Ok((size, doc)) => {
                *min_size = size;
                emit(&doc, out_json);
                PidStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Whether deleting `items[0..len]` allows a proportional allocation.
///
/// # Safety
/// `profile` is a live handle, `items` points to `len` readable values (or is
/// null with `len == 0`) and `valid` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pid_verify(
    profile: *const PidProfile,
    items: *const u32,
    len: usize,
    valid: *mut bool,
) -> PidStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), valid.is_null()) else {
            return fail(PidStatus::NullPointer, "null argument");
        };
        if items.is_null() && len > 0 {
            return fail(PidStatus::NullPointer, "null item array");
        }
        let ids: &[u32] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(items, len)
        };
        let deleted: ItemSet = ids.iter().map(|id| Item(*id)).collect();
        match check_solution(&p.profile, &deleted) {
            Ok(allocation) => {
                *valid = allocation.is_some();
                PidStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pid_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
