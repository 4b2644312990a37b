//! C ABI for the verification engine: an opaque run handle driven by JSON
//! configurations, returning JSON reports and integer status codes.
//!
//! Every returned string is UTF-8 and NUL-terminated. Strings returned by
//! `smv_*_json` functions are owned by the caller and must be released with
//! [`smv_string_free`]; strings returned by accessors on a handle stay
//! owned by the handle and die with it.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use smverify::config::RunConfig;
use smverify::connections::{ConnectionSet, PhysConstants};
use smverify::manifold::Chart;
use smverify::runner;

/// Status codes mirroring the CLI exit codes.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmvStatus {
    /// Every requested suite passed.
    Ok = 0,
    /// The run completed but at least one suite failed.
    SuiteFailure = 1,
    /// The configuration could not be parsed or the run could not start.
    ConfigError = 2,
    /// A required pointer argument was null.
    NullArgument = -1,
}

/// An opaque verification run: a parsed configuration plus, after
/// execution, the report and status.
pub struct SmvRun {
    config: RunConfig,
    report_json: Option<CString>,
    error: Option<CString>,
    passed: bool,
}

fn cstring(text: &str) -> CString {
    CString::new(text.replace('\0', " ")).expect("NUL bytes stripped")
}

/// Parse a JSON configuration into a new run handle.
///
/// On success writes the handle to `out` and returns `Ok`. On parse errors
/// returns `ConfigError` and leaves `out` untouched.
///
/// # Safety
/// `config_json` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn smv_run_new(
    config_json: *const c_char,
    out: *mut *mut SmvRun,
) -> SmvStatus {
    if config_json.is_null() || out.is_null() {
        return SmvStatus::NullArgument;
    }
    let text = match unsafe { CStr::from_ptr(config_json) }.to_str() {
        Ok(text) => text,
        Err(_) => return SmvStatus::ConfigError,
    };
    match RunConfig::from_json(text) {
        Ok(config) => {
            let handle = Box::new(SmvRun {
                config,
                report_json: None,
                error: None,
                passed: false,
            });
            unsafe { *out = Box::into_raw(handle) };
            SmvStatus::Ok
        }
        Err(_) => SmvStatus::ConfigError,
    }
}

/// Execute the run. Returns `Ok` when every suite passed, `SuiteFailure`
/// when the run completed with failures, `ConfigError` when it could not
/// start; the error message is then available from [`smv_run_error`].
///
/// # Safety
/// `run` must be a handle from [`smv_run_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn smv_run_execute(run: *mut SmvRun) -> SmvStatus {
    let Some(run) = (unsafe { run.as_mut() }) else {
        return SmvStatus::NullArgument;
    };
    match runner::run(&run.config) {
        Ok(report) => {
            run.passed = report.passed();
            run.report_json = Some(cstring(&report.to_json()));
            run.error = None;
            if run.passed {
                SmvStatus::Ok
            } else {
                SmvStatus::SuiteFailure
            }
        }
        Err(err) => {
            run.error = Some(cstring(&err.to_string()));
            SmvStatus::ConfigError
        }
    }
}

/// The JSON report of an executed run, or null when the run has not been
/// executed. The string is owned by the handle.
///
/// # Safety
/// `run` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn smv_run_report_json(run: *const SmvRun) -> *const c_char {
    let Some(run) = (unsafe { run.as_ref() }) else {
        return ptr::null();
    };
    run.report_json
        .as_ref()
        .map(|s| s.as_ptr())
        .unwrap_or(ptr::null())
}

/// The last execution error of the handle, or null. Owned by the handle.
///
/// # Safety
/// `run` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn smv_run_error(run: *const SmvRun) -> *const c_char {
    let Some(run) = (unsafe { run.as_ref() }) else {
        return ptr::null();
    };
    run.error
        .as_ref()
        .map(|s| s.as_ptr())
        .unwrap_or(ptr::null())
}

/// Release a run handle.
///
/// # Safety
/// `run` must be a handle from [`smv_run_new`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn smv_run_free(run: *mut SmvRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// The default configuration as JSON. Release with [`smv_string_free`].
#[no_mangle]
pub extern "C" fn smv_default_config_json() -> *mut c_char {
    let text = serde_json::to_string_pretty(&RunConfig::default()).expect("default serializes");
    cstring(&text).into_raw()
}

/// The preset catalogs (chart, vacuum, constants) as JSON. Release with
/// [`smv_string_free`].
#[no_mangle]
pub extern "C" fn smv_list_presets_json() -> *mut c_char {
    let catalog = serde_json::json!({
        "chart": Chart::preset_catalog()
            .into_iter()
            .map(|(name, desc)| serde_json::json!({"name": name, "description": desc}))
            .collect::<Vec<_>>(),
        "vacuum": ConnectionSet::vacuum_catalog()
            .into_iter()
            .map(|(name, desc)| serde_json::json!({"name": name, "description": desc}))
            .collect::<Vec<_>>(),
        "constants": PhysConstants::catalog()
            .into_iter()
            .map(|(name, desc)| serde_json::json!({"name": name, "description": desc}))
            .collect::<Vec<_>>(),
    });
    cstring(&serde_json::to_string_pretty(&catalog).expect("catalog serializes")).into_raw()
}

/// Release a string returned by one of the `smv_*_json` functions.
///
/// # Safety
/// `text` must come from this library and be freed at most once.
#[no_mangle]
pub unsafe extern "C" fn smv_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn smv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
