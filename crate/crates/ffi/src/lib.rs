//! C interface to the `weingarten` engine.
//!
//! Results are returned as text (`p/q` rationals, decimal integers) in
//! caller-owned buffers. Every function returns a [`WgStatus`]; on failure
//! the message is available from [`wg_last_error`] on the same thread.
//!
//! A `WgEngine` caches solved tables and path counts. It may be shared
//! between threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weingarten::exact::SolveOptions;
use weingarten::moments::MomentSpec;
use weingarten::rational::format_rational;
use weingarten::{Engine, Family, WgError};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WgStatus {
    Ok = 0,
    /// Malformed text, unknown family or mismatched element.
    InvalidArgument = 1,
    /// Well-formed input outside the supported domain, e.g. d < k.
    DomainError = 2,
    /// The linear system at this dimension is singular.
    Singular = 3,
    /// The output buffer is too short; `needed` holds the required size.
    BufferTooSmall = 4,
    NullPointer = 5,
    /// A bug: the engine panicked.
    Internal = 6,
}

/// Opaque engine handle.
pub struct WgEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &WgError) -> WgStatus {
    match e {
        WgError::Parse { .. }
        | WgError::InvalidArgument { .. }
        | WgError::LengthMismatch(_)
        | WgError::LevelMismatch { .. }
        | WgError::NotMonotone(_)
        | WgError::ProductMismatch(_) => WgStatus::InvalidArgument,
        WgError::Singular { .. } => WgStatus::Singular,
        _ => WgStatus::DomainError,
    }
}

/// Failure carried to the boundary.
enum Fail {
    Status(WgStatus, String),
    Engine(WgError),
}

impl From<WgError> for Fail {
    fn from(e: WgError) -> Self {
        Fail::Engine(e)
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(WgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(WgStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn engine<'a>(p: *const WgEngine) -> Result<&'a Engine, Fail> {
    p.as_ref()
        .map(|e| &e.inner)
        .ok_or_else(|| Fail::Status(WgStatus::NullPointer, "engine is null".into()))
}

fn family(name: &str) -> Result<Family, Fail> {
    name.parse::<Family>().map_err(Fail::Engine)
}

/// Runs `f` and copies its text into `buf` (NUL-terminated). `needed`, if
/// not null, receives the buffer size the result requires.
unsafe fn deliver<F>(buf: *mut c_char, len: usize, needed: *mut usize, f: F) -> WgStatus
where
    F: FnOnce() -> Result<String, Fail>,
{
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err(Fail::Status(WgStatus::Internal, "internal panic".into())));
    let out = match result {
        Ok(s) => s,
        Err(Fail::Status(s, msg)) => {
            set_error(msg);
            return s;
        }
        Err(Fail::Engine(e)) => {
            set_error(e.to_string());
            return status_of(&e);
        }
    };
    let size = out.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        set_error(format!("result needs {size} bytes, buffer has {len}"));
        return WgStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(out.as_ptr(), buf as *mut u8, out.len());
    *buf.add(out.len()) = 0;
    WgStatus::Ok
}

/// Creates an engine. Release it with `wg_engine_free`.
#[no_mangle]
pub extern "C" fn wg_engine_new() -> *mut WgEngine {
    Box::into_raw(Box::new(WgEngine { inner: Engine::new() }))
}

/// Releases an engine; null is ignored.
///
/// # Safety
/// `engine` must come from `wg_engine_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wg_engine_free(engine: *mut WgEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Weingarten value as `p/q`.
///
/// `family` is one of `u`, `o`, `coe`, `sp`, `aiii`; `element` is a
/// permutation (`2,1`) or a pair partition (`1,2|3,4`). `dminus` is only
/// read when `has_dminus` is true and is required for `aiii`. With `force`
/// the dimension range check is skipped.
///
/// # Safety
/// String arguments must be NUL-terminated; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn wg_value(
    engine: *const WgEngine,
    family: *const c_char,
    element: *const c_char,
    d: i64,
    dminus: i64,
    has_dminus: bool,
    force: bool,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WgStatus {
    deliver(buf, len, needed, || {
        let eng = self::engine(engine)?;
        let fam = self::family(text(family, "family")?)?;
        let node = fam.graph_kind().parse_node(text(element, "element")?)?;
        let dm = has_dminus.then_some(dminus);
        let v = eng.value(fam, &node, d, dm, SolveOptions { force })?;
        Ok(format_rational(&v))
    })
}

/// Number of paths from `element` to the empty vertex with `solid` solid
/// edges, in decimal. `family` selects the graph as in `wg_value`.
///
/// # Safety
/// As for `wg_value`.
#[no_mangle]
pub unsafe extern "C" fn wg_count_paths(
    engine: *const WgEngine,
    family: *const c_char,
    element: *const c_char,
    solid: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WgStatus {
    deliver(buf, len, needed, || {
        let eng = self::engine(engine)?;
        let kind = self::family(text(family, "family")?)?.graph_kind();
        let node = kind.parse_node(text(element, "element")?)?;
        Ok(eng.path_counts().count(kind, &node, solid).to_string())
    })
}

/// Exact Haar integral of a monomial such as
/// `rows=1;cols=1;crows=1;ccols=1`, as `p/q`.
///
/// # Safety
/// As for `wg_value`.
#[no_mangle]
pub unsafe extern "C" fn wg_moment(
    engine: *const WgEngine,
    family: *const c_char,
    monomial: *const c_char,
    d: i64,
    dminus: i64,
    has_dminus: bool,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> WgStatus {
    deliver(buf, len, needed, || {
        let eng = self::engine(engine)?;
        let fam = self::family(text(family, "family")?)?;
        let spec = MomentSpec::parse_monomial(fam, text(monomial, "monomial")?, d, has_dminus.then_some(dminus))?;
        Ok(format_rational(&spec.evaluate(eng)?.value))
    })
}

/// Copies the calling thread's last error message into `buf`, truncating
/// if needed. Returns the full message length in bytes (without the NUL).
///
/// # Safety
/// `buf` must hold `len` bytes, or be null.
#[no_mangle]
pub unsafe extern "C" fn wg_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
