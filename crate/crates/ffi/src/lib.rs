//! C ABI over the `chabauty` library.
//!
//! All handles are opaque and owned by the caller, who releases them with
//! the matching `*_free` function. Functions return a [`ChabautyStatus`];
//! on failure the message is available from [`chabauty_last_error`] until
//! the next call on the same thread. Strings returned through `char **`
//! out-parameters are freed with [`chabauty_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chabauty::cli::{self, json, Command, Options};
use chabauty::error::Error;
use chabauty::exactnum::fmt_rat;
use chabauty::metric::chabauty_dist;
use chabauty::prufer::{ClosedSubG, Gpk};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChabautyStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    RankTooLow = 10,
    MalformedFamily = 11,
    InvalidSheet = 12,
    InvalidPosition = 13,
    NonRationalInput = 14,
    InconsistentDescriptor = 15,
    MismatchedAmbient = 16,
    EvenPrime = 17,
    InsufficientPrecision = 18,
    ResolutionTooCoarse = 19,
    FiniteInput = 20,
    ConstraintError = 21,
    SchemaError = 22,
    LevelCap = 23,
    IoError = 24,
}

impl From<&Error> for ChabautyStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::RankTooLow => ChabautyStatus::RankTooLow,
            Error::MalformedFamily(_) => ChabautyStatus::MalformedFamily,
            Error::InvalidSheet { .. } => ChabautyStatus::InvalidSheet,
            Error::InvalidPosition => ChabautyStatus::InvalidPosition,
            Error::NonRationalInput(_) => ChabautyStatus::NonRationalInput,
            Error::InconsistentDescriptor(_) => ChabautyStatus::InconsistentDescriptor,
            Error::MismatchedAmbient(_) => ChabautyStatus::MismatchedAmbient,
            Error::EvenPrime => ChabautyStatus::EvenPrime,
            Error::InsufficientPrecision(_) => ChabautyStatus::InsufficientPrecision,
            Error::ResolutionTooCoarse(_) => ChabautyStatus::ResolutionTooCoarse,
            Error::FiniteInput => ChabautyStatus::FiniteInput,
            Error::Constraint(_) => ChabautyStatus::ConstraintError,
            Error::Schema { .. } => ChabautyStatus::SchemaError,
            Error::LevelCap { .. } => ChabautyStatus::LevelCap,
            Error::Io(_) => ChabautyStatus::IoError,
        }
    }
}

/// Options shared by the commands run through it.
pub struct ChabautySession {
    opts: Options,
}

/// Output of one command: the JSON text and the CLI exit status.
pub struct ChabautyResult {
    json: CString,
    exit_code: c_int,
}

/// A parsed closed subgroup of `G_{p,k}`.
pub struct ChabautySubgroup {
    g: Gpk,
    h: ClosedSubG,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(ChabautyStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

/// Runs `f`, recording its failure (or panic) as the last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ChabautyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChabautyStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ChabautyStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ChabautyStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(ChabautyStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(ChabautyStatus::NullArgument, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(ChabautyStatus::NullArgument, format!("{what} is null")))
}

fn c_string(s: String) -> CString {
    CString::new(s).expect("library output has no NUL bytes")
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn chabauty_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code, e.g. `"SCHEMA_ERROR"`.
#[no_mangle]
pub extern "C" fn chabauty_status_name(status: ChabautyStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ChabautyStatus::Ok => c"OK",
        ChabautyStatus::NullArgument => c"NULL_ARGUMENT",
        ChabautyStatus::InvalidUtf8 => c"INVALID_UTF8",
        ChabautyStatus::Panic => c"PANIC",
        ChabautyStatus::RankTooLow => c"RANK_TOO_LOW",
        ChabautyStatus::MalformedFamily => c"MALFORMED_FAMILY",
        ChabautyStatus::InvalidSheet => c"INVALID_SHEET",
        ChabautyStatus::InvalidPosition => c"INVALID_POSITION",
        ChabautyStatus::NonRationalInput => c"NON_RATIONAL_INPUT",
        ChabautyStatus::InconsistentDescriptor => c"INCONSISTENT_DESCRIPTOR",
        ChabautyStatus::MismatchedAmbient => c"MISMATCHED_AMBIENT",
        ChabautyStatus::EvenPrime => c"EVEN_PRIME",
        ChabautyStatus::InsufficientPrecision => c"INSUFFICIENT_PRECISION",
        ChabautyStatus::ResolutionTooCoarse => c"RESOLUTION_TOO_COARSE",
        ChabautyStatus::FiniteInput => c"FINITE_INPUT",
        ChabautyStatus::ConstraintError => c"CONSTRAINT_ERROR",
        ChabautyStatus::SchemaError => c"SCHEMA_ERROR",
        ChabautyStatus::LevelCap => c"LEVEL_CAP",
        ChabautyStatus::IoError => c"IO_ERROR",
    };
    s.as_ptr()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn chabauty_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn chabauty_session_new() -> *mut ChabautySession {
    Box::into_raw(Box::new(ChabautySession { opts: Options::default() }))
}

/// # Safety
/// `s` must come from [`chabauty_session_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_free(s: *mut ChabautySession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Window level; a negative value unsets it.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_set_level(s: *mut ChabautySession, level: i32) -> ChabautyStatus {
    guard(|| {
        out_ptr(s, "session")?.opts.level = u32::try_from(level).ok();
        Ok(())
    })
}

/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_set_max_level(s: *mut ChabautySession, cap: u32) -> ChabautyStatus {
    guard(|| {
        out_ptr(s, "session")?.opts.max_level = cap;
        Ok(())
    })
}

/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_set_canon(s: *mut ChabautySession, canon: bool) -> ChabautyStatus {
    guard(|| {
        out_ptr(s, "session")?.opts.canon = canon;
        Ok(())
    })
}

/// Item count for `enum` and `approx`; zero unsets it.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_set_count(s: *mut ChabautySession, count: usize) -> ChabautyStatus {
    guard(|| {
        out_ptr(s, "session")?.opts.count = (count > 0).then_some(count);
        Ok(())
    })
}

/// Tolerance for `certify` as `"num/den"`; NULL unsets it.
///
/// # Safety
/// `s` must be a live session and `eps` NULL or a C string.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_set_epsilon(s: *mut ChabautySession, eps: *const c_char) -> ChabautyStatus {
    guard(|| {
        let value = if eps.is_null() { None } else { Some(text(eps, "epsilon")?.to_owned()) };
        out_ptr(s, "session")?.opts.epsilon = value;
        Ok(())
    })
}

/// Runs a command (`"canon"`, `"dist"`, `"limit"`, ...) on a JSON
/// document. Command-level failures are reported inside the result, as
/// the CLI does; the status only covers bad arguments.
///
/// # Safety
/// `s` must be a live session, `command` and `input` C strings, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn chabauty_session_run(
    s: *const ChabautySession,
    command: *const c_char,
    input: *const c_char,
    out: *mut *mut ChabautyResult,
) -> ChabautyStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let session = handle(s, "session")?;
        let cmd: Command = text(command, "command")?.parse()?;
        let input = text(input, "input")?;
        let mut opts = session.opts.clone();
        if cmd == Command::DecomposeUnit && !input.trim_start().starts_with('{') {
            opts.unit = Some(input.to_owned());
        }
        let outcome = cli::execute(cmd, &opts, input);
        *out = Box::into_raw(Box::new(ChabautyResult { json: c_string(outcome.output), exit_code: outcome.code }));
        Ok(())
    })
}

/// JSON text of a result; valid until the result is freed.
///
/// # Safety
/// `r` must be a live result.
#[no_mangle]
pub unsafe extern "C" fn chabauty_result_json(r: *const ChabautyResult) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Exit status the CLI would report: 0, 1 (domain) or 2 (schema/usage).
///
/// # Safety
/// `r` must be a live result.
#[no_mangle]
pub unsafe extern "C" fn chabauty_result_exit_code(r: *const ChabautyResult) -> c_int {
    r.as_ref().map_or(-1, |r| r.exit_code)
}

/// # Safety
/// `r` must come from [`chabauty_session_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn chabauty_result_free(r: *mut ChabautyResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Parses a Gpk subgroup document.
///
/// # Safety
/// `doc` must be a C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn chabauty_subgroup_parse(doc: *const c_char, out: *mut *mut ChabautySubgroup) -> ChabautyStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let value: serde_json::Value = serde_json::from_str(text(doc, "doc")?)
            .map_err(|e| Error::Schema { pointer: "/".into(), message: format!("invalid JSON: {e}") })?;
        let node = json::Node::root(&value);
        let g = match json::parse_ambient(&node)? {
            json::Ambient::Gpk(g) => g,
            _ => return Err(node.err("expected a Gpk document").into()),
        };
        let h = json::parse_gsub(&g, node)?;
        *out = Box::into_raw(Box::new(ChabautySubgroup { g, h }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`chabauty_subgroup_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn chabauty_subgroup_free(h: *mut ChabautySubgroup) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Canonical descriptor as a JSON document.
///
/// # Safety
/// `h` must be a live subgroup and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn chabauty_subgroup_canon(h: *const ChabautySubgroup, out: *mut *mut c_char) -> ChabautyStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let h = handle(h, "subgroup")?;
        let doc = json::document(&json::Ambient::Gpk(h.g), json::gsub_json(&h.h.canon()?));
        *out = c_string(doc.to_string()).into_raw();
        Ok(())
    })
}

/// Membership of an element given as `["w", "c", "z"]`.
///
/// # Safety
/// `h` must be a live subgroup, `element` a C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn chabauty_subgroup_member(
    h: *const ChabautySubgroup,
    element: *const c_char,
    out: *mut bool,
) -> ChabautyStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let h = handle(h, "subgroup")?;
        let value: serde_json::Value = serde_json::from_str(text(element, "element")?)
            .map_err(|e| Error::Schema { pointer: "/".into(), message: format!("invalid JSON: {e}") })?;
        let x = json::parse_gelem(&h.g, json::Node::root(&value))?;
        *out = h.h.member(&x)?;
        Ok(())
    })
}

/// Chabauty distance truncated at `level`, as an exact `"num/den"` string.
///
/// # Safety
/// `a` and `b` must be live subgroups and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn chabauty_subgroup_distance(
    a: *const ChabautySubgroup,
    b: *const ChabautySubgroup,
    level: u32,
    out: *mut *mut c_char,
) -> ChabautyStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if level > cli::DEFAULT_MAX_LEVEL {
            return Err(Error::LevelCap { level, cap: cli::DEFAULT_MAX_LEVEL }.into());
        }
        *out = c_string(fmt_rat(&chabauty_dist(&a.h, &b.h, level)?)).into_raw();
        Ok(())
    })
}
