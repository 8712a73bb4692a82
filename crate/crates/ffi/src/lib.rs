//! C ABI over `coobs-core`.
//!
//! Generators and control contexts cross the boundary as opaque handles,
//! automata and agent lists as the JSON file format, and reports as the
//! `--json` report format of the `coobs` binary. Every function returns a
//! [`CoobsStatus`]; on failure [`coobs_last_error_message`] describes the
//! error. Strings returned through `char **` out-parameters are owned by
//! the caller and released with [`coobs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coobs_core::automata::project;
use coobs_core::format::{
    generator_to_json, parse_agents, parse_generator, CheckReport, SynthReport,
};
use coobs_core::synthesize::{extract_local_supervisor, synthesize, Algorithm};
use coobs_core::verify::{check, Property};
use coobs_core::{ControlContext, Error, Event, EventSet, Generator};

/// Opaque generator handle.
pub struct CoobsGenerator(Generator);

/// Opaque handle for a plant together with its agents.
pub struct CoobsContext(ControlContext);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoobsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or unsupported format version.
    Parse = 3,
    /// Well-formed input that violates a precondition (unknown event,
    /// agent, property or algorithm; spec outside the plant; ...).
    InvalidInput = 4,
    /// Local supervisor extraction on a result that is not relatively
    /// coobservable.
    Conflict = 5,
    NoConvergence = 6,
    /// Internal panic; the message carries the payload.
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CoobsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Json(_) | Error::FormatVersion(_) | Error::Io(_) => CoobsStatus::Parse,
            Error::SupervisorConflict { .. } => CoobsStatus::Conflict,
            Error::NoConvergence(_) => CoobsStatus::NoConvergence,
            _ => CoobsStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CoobsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CoobsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            CoobsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CoobsStatus::NullArgument, format!("`{what}` is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CoobsStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

fn invalid(msg: String) -> Failure {
    Failure(CoobsStatus::InvalidInput, msg)
}

/// Message of the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn coobs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coobs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an automaton file.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_generator_from_json(
    json: *const c_char,
    out: *mut *mut CoobsGenerator,
) -> CoobsStatus {
    guard(|| {
        let g = parse_generator(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(CoobsGenerator(g))), "out")
    })
}

/// # Safety
/// `g` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_generator_to_json(
    g: *const CoobsGenerator,
    out: *mut *mut c_char,
) -> CoobsStatus {
    guard(|| {
        let g = handle(g, "g")?;
        put(out, owned(generator_to_json(&g.0, None)), "out")
    })
}

/// Number of states; 0 for a null handle.
///
/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coobs_generator_num_states(g: *const CoobsGenerator) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_states())
}

/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coobs_generator_num_transitions(g: *const CoobsGenerator) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_transitions())
}

/// # Safety
/// `g` is null or a handle from this library that is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coobs_generator_free(g: *mut CoobsGenerator) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Builds a context from a plant and an agents file. The plant is copied.
///
/// # Safety
/// `plant` is a live handle; `agents_json` is a nul-terminated string;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_context_new(
    plant: *const CoobsGenerator,
    agents_json: *const c_char,
    out: *mut *mut CoobsContext,
) -> CoobsStatus {
    guard(|| {
        let plant = handle(plant, "plant")?;
        let agents = parse_agents(text(agents_json, "agents_json")?)?;
        let ctx = ControlContext::new(plant.0.clone(), agents)?;
        put(out, Box::into_raw(Box::new(CoobsContext(ctx))), "out")
    })
}

/// # Safety
/// `ctx` is null or a handle from this library that is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn coobs_context_free(ctx: *mut CoobsContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Decides `property` (as named by `coobs check`) for `spec`. `ambient` may
/// be null. On success `*holds` is set; when `report_json` is non-null it
/// receives the check report, witness included.
///
/// # Safety
/// Handles are live, strings nul-terminated, `holds` writable and
/// `report_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_check(
    ctx: *const CoobsContext,
    property: *const c_char,
    spec: *const CoobsGenerator,
    ambient: *const CoobsGenerator,
    holds: *mut bool,
    report_json: *mut *mut c_char,
) -> CoobsStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let property: Property = text(property, "property")?.parse().map_err(invalid)?;
        let spec = handle(spec, "spec")?;
        let ambient = ambient.as_ref().map(|g| &g.0);
        let v = check(&property, &spec.0, ambient, &ctx.0)?;
        put(holds, v.holds, "holds")?;
        if !report_json.is_null() {
            let rep = CheckReport::new(&property.to_string(), &v);
            report_json.write(owned(
                serde_json::to_string(&rep).expect("report serializes"),
            ));
        }
        Ok(())
    })
}

/// Runs `algorithm` (as named by `coobs synth`). `ambient` may be null.
/// `*result` receives a new handle, which may hold the empty generator;
/// `report_json`, if non-null, receives the synthesis report with an empty
/// `result` path.
///
/// # Safety
/// Handles are live, strings nul-terminated, `result` writable and
/// `report_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_synthesize(
    ctx: *const CoobsContext,
    algorithm: *const c_char,
    spec: *const CoobsGenerator,
    ambient: *const CoobsGenerator,
    result: *mut *mut CoobsGenerator,
    report_json: *mut *mut c_char,
) -> CoobsStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let algorithm: Algorithm = text(algorithm, "algorithm")?.parse().map_err(invalid)?;
        let spec = handle(spec, "spec")?;
        if result.is_null() {
            return Err(null("result"));
        }
        let ambient = ambient.as_ref().map(|g| &g.0);
        let r = synthesize(&algorithm, &spec.0, ambient, &ctx.0)?;
        if !report_json.is_null() {
            let rep = SynthReport::new("", &r);
            report_json.write(owned(
                serde_json::to_string(&rep).expect("report serializes"),
            ));
        }
        result.write(Box::into_raw(Box::new(CoobsGenerator(r.result))));
        Ok(())
    })
}

/// Local supervisor of `agent` for a synthesized `result`.
///
/// # Safety
/// Handles are live, `agent` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_extract_local_supervisor(
    ctx: *const CoobsContext,
    result: *const CoobsGenerator,
    agent: *const c_char,
    out: *mut *mut CoobsGenerator,
) -> CoobsStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let result = handle(result, "result")?;
        let sup = extract_local_supervisor(&result.0, &ctx.0, text(agent, "agent")?)?;
        put(out, Box::into_raw(Box::new(CoobsGenerator(sup))), "out")
    })
}

/// Natural projection onto the events of `keep_json`, a JSON array of
/// event names.
///
/// # Safety
/// `g` is live, `keep_json` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coobs_project(
    g: *const CoobsGenerator,
    keep_json: *const c_char,
    out: *mut *mut CoobsGenerator,
) -> CoobsStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let names: Vec<String> =
            serde_json::from_str(text(keep_json, "keep_json")?).map_err(Error::from)?;
        let keep: EventSet = names.iter().map(|e| Event::new(e)).collect();
        let p = project(&g.0, &keep)?;
        put(out, Box::into_raw(Box::new(CoobsGenerator(p))), "out")
    })
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn coobs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
