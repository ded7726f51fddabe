//! C ABI for reslogic.
//!
//! Every entry point returns an [`RlStatus`]. On failure the message is kept per thread
//! and read back with [`rl_last_error`]. Objects are opaque handles that the caller
//! releases with the matching `_free` function; strings handed out must be released
//! with [`rl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use reslogic::demo::{demo_assembly_process, demo_assembly_resource, Variant};
use reslogic::game::{Game, Position};
use reslogic::mll::{decide_binary_tautology, MllFormula};
use reslogic::semantics::{check_validity_desk_scale, eval_process, EvalConfig, ValidityVerdict};
use reslogic::session::{parse_slave_spec, Reply, Session};
use reslogic::syntax::{parse, parse_resource, Level, Process};
use reslogic::world::{parse_world, Interval, StepWorld, Time};
use reslogic::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Arity = 4,
    UnknownDefinition = 5,
    MalformedDefinition = 6,
    NotClosed = 7,
    Horizon = 8,
    Substitution = 9,
    IllegalMove = 10,
    World = 11,
    Script = 12,
    TooManyLetters = 13,
    NotAccepting = 14,
    Other = 15,
    Panic = 16,
}

impl From<&Error> for RlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::ChainOrder => RlStatus::Syntax,
            Error::Arity { .. } => RlStatus::Arity,
            Error::UnknownDef(_) => RlStatus::UnknownDefinition,
            Error::Shape { .. } => RlStatus::MalformedDefinition,
            Error::Open(_) | Error::Unbound(_) => RlStatus::NotClosed,
            Error::Horizon { .. } => RlStatus::Horizon,
            Error::Substitution(_) => RlStatus::Substitution,
            Error::Move(_) => RlStatus::IllegalMove,
            Error::World(_) => RlStatus::World,
            Error::Script(_) => RlStatus::Script,
            Error::TooManyLetters(_) => RlStatus::TooManyLetters,
            Error::NotAccepting => RlStatus::NotAccepting,
            Error::Other(_) => RlStatus::Other,
        }
    }
}

/// Evaluation limits. Pass a null pointer to use the defaults (horizon 32, probe depth 3,
/// constants 0..=31).
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RlConfig {
    pub horizon: u64,
    pub probe_depth: usize,
    pub domain_max: u32,
}

/// A parsed world: a step function from time to situations.
pub struct RlWorld {
    world: StepWorld,
    domain_max: Option<u32>,
}

/// A parsed, closed process.
pub struct RlProcess(Process);

/// A play in progress: the caller moves as master, a slave strategy answers.
pub struct RlSession(Session);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(RlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(RlStatus::from(&e), e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(RlStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(RlStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(RlStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(RlStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

unsafe fn config(cfg: *const RlConfig) -> EvalConfig {
    match cfg.as_ref() {
        Some(c) => EvalConfig { horizon: c.horizon, probe_depth: c.probe_depth, domain_max: c.domain_max },
        None => EvalConfig::default(),
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default evaluation limits.
#[no_mangle]
pub extern "C" fn rl_config_default() -> RlConfig {
    let d = EvalConfig::default();
    RlConfig { horizon: d.horizon, probe_depth: d.probe_depth, domain_max: d.domain_max }
}

/// Parse a world file (lines of `@t: atoms`).
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_world_parse(src: *const c_char, out: *mut *mut RlWorld) -> RlStatus {
    guard(|| {
        let (world, domain_max) = parse_world(text(src)?)?;
        put(out, Box::into_raw(Box::new(RlWorld { world, domain_max })))
    })
}

/// # Safety
/// `w` must come from [`rl_world_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn rl_world_free(w: *mut RlWorld) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Parse a process document; the last item must be a process.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_process_parse(src: *const c_char, out: *mut *mut RlProcess) -> RlStatus {
    guard(|| {
        let doc = parse(text(src)?, Level::Process)?;
        let p = doc.process().cloned().ok_or_else(|| Failure(RlStatus::Syntax, "no process in document".into()))?;
        put(out, Box::into_raw(Box::new(RlProcess(p))))
    })
}

/// # Safety
/// `p` must come from [`rl_process_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn rl_process_free(p: *mut RlProcess) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of a process. Free the result with [`rl_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_process_to_string(p: *const RlProcess, out: *mut *mut c_char) -> RlStatus {
    guard(|| put(out, owned(handle(p)?.0.to_string())))
}

/// Truth of a process on `(lo, hi)`, or on `(lo, inf)` when `hi_infinite` is set. A
/// domain declared by the world file overrides the one in `cfg`.
///
/// # Safety
/// Handles must be live, `cfg` valid or null, `out_truth` valid.
#[no_mangle]
pub unsafe extern "C" fn rl_process_eval(
    p: *const RlProcess,
    w: *const RlWorld,
    lo: u64,
    hi: u64,
    hi_infinite: bool,
    cfg: *const RlConfig,
    out_truth: *mut bool,
) -> RlStatus {
    guard(|| {
        let (p, w) = (handle(p)?, handle(w)?);
        let mut cfg = config(cfg);
        if let Some(d) = w.domain_max {
            cfg.domain_max = d;
        }
        let iv = Interval::new(lo, if hi_infinite { Time::Infinity } else { Time::At(hi) })?;
        put(out_truth, eval_process(&w.world, iv, &p.0, &cfg)?.truth)
    })
}

/// Search small worlds for a counterexample. `out_valid` is false when one was found;
/// `out_report` (optional) receives a description. Finding none is evidence, not proof.
///
/// # Safety
/// `p` must be live, `cfg` valid or null, `out_valid` valid, `out_report` valid or null.
#[no_mangle]
pub unsafe extern "C" fn rl_process_check_validity(
    p: *const RlProcess,
    cfg: *const RlConfig,
    trials: usize,
    seed: u64,
    out_valid: *mut bool,
    out_report: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let p = handle(p)?;
        let cfg = config(cfg);
        let v = check_validity_desk_scale(&p.0, &cfg, trials, seed)?;
        let report = match &v {
            ValidityVerdict::NoCounterexampleFound { worlds, intervals, note } => {
                format!("no counterexample found in {worlds} worlds and {intervals} intervals ({note})")
            }
            ValidityVerdict::Counterexample { world, interval } => {
                format!("counterexample on {interval}:\n{}", world.to_text(Some(cfg.domain_max)))
            }
        };
        put(out_valid, !v.is_counterexample())?;
        if !out_report.is_null() {
            put(out_report, owned(report))?;
        }
        Ok(())
    })
}

/// Decide whether an MLL formula is a binary tautology. When it is, `out_strategy`
/// (optional) receives a slave spec such as `pairing:c~a.l`; otherwise it is set to null.
///
/// # Safety
/// `src` must be a NUL-terminated string, `out_tautology` valid, `out_strategy` valid or null.
#[no_mangle]
pub unsafe extern "C" fn rl_mll_decide(src: *const c_char, out_tautology: *mut bool, out_strategy: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let (r, _) = parse_resource(text(src)?)?;
        let f = MllFormula::from_resource(&r)?;
        let m = decide_binary_tautology(&f)?;
        put(out_tautology, m.is_some())?;
        if !out_strategy.is_null() {
            let spec = m.map(|m| {
                let pairs: Vec<String> = m.path_pairs(&f).iter().map(|(a, b)| format!("{a}~{b}")).collect();
                owned(format!("pairing:{}", pairs.join(",")))
            });
            put(out_strategy, spec.unwrap_or(ptr::null_mut()))?;
        }
        Ok(())
    })
}

/// Start a play of `resource` against the slave strategy `slave` (`waiting`,
/// `diverging`, `pairing:P~Q,...`, `script:...`, optionally prefixed by `delay=N/`).
///
/// # Safety
/// Strings must be NUL-terminated, `cfg` valid or null, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rl_session_new(
    resource: *const c_char,
    slave: *const c_char,
    cfg: *const RlConfig,
    out: *mut *mut RlSession,
) -> RlStatus {
    guard(|| {
        let cfg = config(cfg);
        let (r, defs) = parse_resource(text(resource)?)?;
        let start = Position::from_resource(&r)?;
        let s = parse_slave_spec(text(slave)?, &start)?;
        let session = Session::new(Game::new(defs, cfg.domain_max), &start, s, cfg)?;
        put(out, Box::into_raw(Box::new(RlSession(session))))
    })
}

/// One input line, as in the interactive player: `path -> branch(args)`, an empty line
/// to let a tick pass, `:show`, `:play`, `:star`, `:eval <file>`, `:quit`. A rejected
/// line leaves the session unchanged. `out_finished` (optional) is set after `:quit`.
///
/// # Safety
/// `s` must be live, `line` NUL-terminated, `out_reply` valid, `out_finished` valid or null.
#[no_mangle]
pub unsafe extern "C" fn rl_session_send(
    s: *mut RlSession,
    line: *const c_char,
    out_reply: *mut *mut c_char,
    out_finished: *mut bool,
) -> RlStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| Failure(RlStatus::NullPointer, "null handle".into()))?;
        let (reply, done) = match s.0.handle(text(line)?)? {
            Reply::Text(t) => (t, false),
            Reply::Quit(t) => (t, true),
        };
        put(out_reply, owned(reply))?;
        if !out_finished.is_null() {
            put(out_finished, done)?;
        }
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`rl_session_new`], or be null.
#[no_mangle]
pub unsafe extern "C" fn rl_session_free(s: *mut RlSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Run a bundled demo (`assembly-process`, `assembly-resource:theta`,
/// `assembly-resource:lambda`). `out_ok` tells whether every check held.
///
/// # Safety
/// `name` must be NUL-terminated, `out_ok` valid, `out_report` valid or null.
#[no_mangle]
pub unsafe extern "C" fn rl_demo_run(name: *const c_char, out_ok: *mut bool, out_report: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let name = text(name)?;
        let cfg = EvalConfig::default();
        let report = match name {
            "assembly-process" => demo_assembly_process(&cfg)?,
            _ => match name.strip_prefix("assembly-resource:") {
                Some(v) => demo_assembly_resource(v.parse::<Variant>()?, &cfg)?,
                None => return Err(Failure(RlStatus::Other, format!("unknown demo {name}"))),
            },
        };
        put(out_ok, report.ok())?;
        if !out_report.is_null() {
            put(out_report, owned(report.to_text()))?;
        }
        Ok(())
    })
}
