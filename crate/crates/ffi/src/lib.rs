//! C ABI for building and verifying schemes.
//!
//! Every function returns an [`AsStatus`]. Results come back through out
//! pointers and reports are opaque [`AsReport`] handles released with
//! [`as_report_free`]. After a non-OK status, [`as_last_error`] describes
//! the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use assoc_schemes::report::{run_request, Family, RunReport, RunRequest, VerifyScope};
use assoc_schemes::Error;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The family or order is not valid for this construction.
    InvalidArgument = 2,
    /// A construction or verification step failed internally.
    Failed = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsFamily {
    Twin = 0,
    Gdd = 1,
    Intro = 2,
}

/// Family codes arrive as plain integers so that an out-of-range value
/// from C is an error rather than undefined behaviour.
fn family_of(code: u32) -> Result<Family, AsStatus> {
    match code {
        c if c == AsFamily::Twin as u32 => Ok(Family::Twin),
        c if c == AsFamily::Gdd as u32 => Ok(Family::Gdd),
        c if c == AsFamily::Intro as u32 => Ok(Family::Intro),
        c => {
            set_error(format!("unknown family code {c}"));
            Err(AsStatus::InvalidArgument)
        }
    }
}

pub const AS_VERIFY_AXIOMS: u32 = 1;
pub const AS_VERIFY_DESIGNS: u32 = 1 << 1;
pub const AS_VERIFY_PROPS: u32 = 1 << 2;
pub const AS_EIGEN: u32 = 1 << 3;
pub const AS_SELFDUAL: u32 = 1 << 4;
pub const AS_ALL: u32 = AS_VERIFY_AXIOMS | AS_VERIFY_DESIGNS | AS_VERIFY_PROPS | AS_EIGEN | AS_SELFDUAL;

/// A completed run. Opaque to C.
pub struct AsReport {
    report: RunReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> AsStatus {
    match e {
        Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::EvenOrder(_)
        | Error::InvalidParameter(_)
        | Error::NotBijective(_)
        | Error::Parse(_) => AsStatus::InvalidArgument,
        _ => AsStatus::Failed,
    }
}

fn guard(f: impl FnOnce() -> Result<(), AsStatus>) -> AsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            AsStatus::Panic
        }
    }
}

fn fail(e: Error) -> AsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), AsStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(AsStatus::NullPointer);
    }
    Ok(())
}

/// Builds the scheme for `family` (an [`AsFamily`] value) at order `q`, runs the checks selected
/// by `flags` (a union of the `AS_*` bits) and stores a new report in
/// `*out`. A report whose checks fail is still returned with status OK;
/// query it with [`as_report_passed`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn as_run(family: u32, q: u64, flags: u32, out: *mut *mut AsReport) -> AsStatus {
    guard(|| {
        non_null(out, "out")?;
        let req = RunRequest {
            family: family_of(family)?,
            q,
            verify: VerifyScope {
                axioms: flags & AS_VERIFY_AXIOMS != 0,
                designs: flags & AS_VERIFY_DESIGNS != 0,
                props: flags & AS_VERIFY_PROPS != 0,
            },
            eigen: flags & AS_EIGEN != 0,
            selfdual: flags & AS_SELFDUAL != 0,
            phi: None,
        };
        let report = run_request(&req).map_err(fail)?;
        let json = report.to_json().map_err(fail)?;
        let json = CString::new(json).map_err(|e| {
            set_error(e.to_string());
            AsStatus::Failed
        })?;
        *out = Box::into_raw(Box::new(AsReport { report, json }));
        Ok(())
    })
}

/// Writes whether every check in the report passed.
///
/// # Safety
/// `report` must come from [`as_run`] and not be freed; `passed` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn as_report_passed(report: *const AsReport, passed: *mut bool) -> AsStatus {
    guard(|| {
        non_null(report, "report")?;
        non_null(passed, "passed")?;
        *passed = (*report).report.passed;
        Ok(())
    })
}

/// Writes the vertex count and the number of classes, identity included.
///
/// # Safety
/// `report` must come from [`as_run`] and not be freed; both out pointers
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn as_report_size(report: *const AsReport, vertices: *mut u64, classes: *mut u64) -> AsStatus {
    guard(|| {
        non_null(report, "report")?;
        non_null(vertices, "vertices")?;
        non_null(classes, "classes")?;
        let r = &(*report).report;
        *vertices = r.vertices as u64;
        *classes = r.classes as u64;
        Ok(())
    })
}

/// Points `*json` at the report serialized as JSON. The string is owned
/// by the report and stays valid until [`as_report_free`].
///
/// # Safety
/// `report` must come from [`as_run`] and not be freed; `json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn as_report_json(report: *const AsReport, json: *mut *const c_char) -> AsStatus {
    guard(|| {
        non_null(report, "report")?;
        non_null(json, "json")?;
        *json = (*report).json.as_ptr();
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or come from [`as_run`], and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn as_report_free(report: *mut AsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Checks whether `q` is a valid order for `family` without building
/// anything. Returns OK or InvalidArgument.
#[no_mangle]
pub extern "C" fn as_validate(family: u32, q: u64) -> AsStatus {
    guard(|| assoc_schemes::report::validate(family_of(family)?, q).map_err(fail))
}

/// The message for the last non-OK status on this thread, or an empty
/// string. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn as_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn as_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}
