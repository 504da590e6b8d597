//! C ABI over `shtuka_crit`. Every entry point returns an [`ShtStatus`];
//! on failure [`sht_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shtuka_crit::affweyl::admissible_set;
use shtuka_crit::cli::parse_scenario;
use shtuka_crit::coweight::Coweight;
use shtuka_crit::criteria::{
    check_lau, check_main, check_nonempty, check_quasicompact, find_blocking_all, full_report,
    Scenario, Status, Variant,
};
use shtuka_crit::isospace::{summarize, IsoSpaceSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShtStatus {
    Ok = 0,
    InvalidInput = 1,
    Internal = 2,
    NullPointer = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShtCriterion {
    Nonempty = 0,
    Lau = 1,
    MainIntro = 2,
    MainTheorem = 3,
    Quasicompact = 4,
    DegenerationAllPlacements = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShtVerdict {
    Holds = 0,
    Fails = 1,
    Inapplicable = 2,
}

/// Opaque parsed scenario.
pub struct ShtScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut s = msg.into();
    s.retain(|c| c != '\0');
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn guard(f: impl FnOnce() -> Result<(), (ShtStatus, String)>) -> ShtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ShtStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ShtStatus::Internal
        }
    }
}

fn null() -> (ShtStatus, String) {
    (ShtStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl ToString) -> (ShtStatus, String) {
    (ShtStatus::InvalidInput, msg.to_string())
}

unsafe fn bytes<'a>(s: *const c_char) -> Result<&'a [u8], (ShtStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    Ok(CStr::from_ptr(s).to_bytes())
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), (ShtStatus, String)> {
    let c = CString::new(s).map_err(|e| (ShtStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn pretty<T: serde::Serialize>(x: &T) -> Result<String, (ShtStatus, String)> {
    let v = serde_json::to_value(x).map_err(|e| (ShtStatus::Internal, e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| (ShtStatus::Internal, e.to_string()))
}

/// Parses a scenario file (`{"schema_version":1,"scenario":{…}}`). Invalid
/// scenarios are rejected with every violation listed in the error string.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sht_scenario_parse(
    json: *const c_char,
    out: *mut *mut ShtScenario,
) -> ShtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let parsed = parse_scenario(bytes(json)?).map_err(|vs| {
            invalid(
                vs.iter()
                    .map(|v| format!("{}: {}", v.path, v.message))
                    .collect::<Vec<_>>()
                    .join("\n"),
            )
        })?;
        *out = Box::into_raw(Box::new(ShtScenario {
            inner: parsed.scenario,
        }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from [`sht_scenario_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sht_scenario_free(scenario: *mut ShtScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

impl ShtCriterion {
    fn from_raw(x: i32) -> Option<Self> {
        use ShtCriterion::*;
        [
            Nonempty,
            Lau,
            MainIntro,
            MainTheorem,
            Quasicompact,
            DegenerationAllPlacements,
        ]
        .into_iter()
        .find(|c| *c as i32 == x)
    }
}

/// Evaluates one criterion; `criterion` is a `ShtCriterion` value.
///
/// # Safety
/// `scenario` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sht_check(
    scenario: *const ShtScenario,
    criterion: i32,
    out: *mut ShtVerdict,
) -> ShtStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return Err(null());
        }
        let s = &(*scenario).inner;
        let criterion = ShtCriterion::from_raw(criterion)
            .ok_or_else(|| invalid(format!("unknown criterion {criterion}")))?;
        let v = match criterion {
            ShtCriterion::Nonempty => check_nonempty(s),
            ShtCriterion::Lau => check_lau(s),
            ShtCriterion::MainIntro => check_main(s, Variant::Intro),
            ShtCriterion::MainTheorem => check_main(s, Variant::Theorem),
            ShtCriterion::Quasicompact => check_quasicompact(s),
            ShtCriterion::DegenerationAllPlacements => find_blocking_all(s).map_err(invalid)?,
        };
        *out = match v.status {
            Status::Holds => ShtVerdict::Holds,
            Status::Fails => ShtVerdict::Fails,
            Status::Inapplicable => ShtVerdict::Inapplicable,
        };
        Ok(())
    })
}

/// Full report as pretty JSON; release with [`sht_string_free`].
///
/// # Safety
/// `scenario` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sht_report_json(
    scenario: *const ShtScenario,
    out: *mut *mut c_char,
) -> ShtStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return Err(null());
        }
        give_string(out, pretty(&full_report(&(*scenario).inner))?)
    })
}

/// Summary of a simple (D,φ)-space description, as pretty JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sht_isospace_report_json(
    json: *const c_char,
    out: *mut *mut c_char,
) -> ShtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec: IsoSpaceSpec = serde_json::from_slice(bytes(json)?).map_err(invalid)?;
        let sum = summarize(&spec).map_err(invalid)?;
        give_string(out, pretty(&sum)?)
    })
}

/// `|Adm(λ)|` for a dominant `λ` of length `d`.
///
/// # Safety
/// `lambda` must point to `d` readable integers and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sht_adm_size(lambda: *const i64, d: usize, out: *mut u64) -> ShtStatus {
    guard(|| {
        if lambda.is_null() || out.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(lambda, d).to_vec();
        let lambda = Coweight::new(v).map_err(invalid)?;
        if lambda.d() == 0 {
            return Err(invalid("d must be at least 1"));
        }
        *out = admissible_set(&lambda).len() as u64;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn sht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sht_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
