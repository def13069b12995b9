//! C ABI for surfex.
//!
//! Graphs and embedding schemes are opaque heap handles owned by the caller
//! and released with their `_free` function. Every fallible call returns a
//! [`SurfexStatus`]; the message of the last failure on the calling thread
//! is available from [`surfex_last_error`]. Strings handed out by the
//! library are released with [`surfex_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use surfex::construction::{build_extremal_candidates, construct_ex};
use surfex::embedding::{min_euler_genus, trace_faces, EmbeddingScheme, GenusLimits};
use surfex::extremal::has_minor;
use surfex::graph::{graph6, Graph};
use surfex::spectral::{rho0, spectral_radius};
use surfex::walks::{walk_counts, WalkMode};
use surfex::Error;

/// Result of a call. Values 2, 3 and 4 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfexStatus {
    Ok = 0,
    Io = 1,
    Precondition = 2,
    ScaleRefusal = 3,
    NonConvergence = 4,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

/// Opaque graph handle.
pub struct SurfexGraph(Graph);

/// Opaque embedding scheme handle.
pub struct SurfexScheme(EmbeddingScheme);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SurfexStatus {
    match e.exit_code() {
        3 => SurfexStatus::ScaleRefusal,
        4 => SurfexStatus::NonConvergence,
        _ if matches!(e, Error::Io(_)) => SurfexStatus::Io,
        _ => SurfexStatus::Precondition,
    }
}

enum Fail {
    Lib(Error),
    Null,
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, records any failure and turns panics into [`SurfexStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SurfexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SurfexStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            SurfexStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            SurfexStatus::InvalidUtf8
        }
        Err(_) => {
            set_error("internal panic".into());
            SurfexStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null)
}

unsafe fn graph_arg<'a>(p: *const SurfexGraph) -> Result<&'a Graph, Fail> {
    p.as_ref().map(|g| &g.0).ok_or(Fail::Null)
}

unsafe fn scheme_arg<'a>(p: *const SurfexScheme) -> Result<&'a EmbeddingScheme, Fail> {
    p.as_ref().map(|s| &s.0).ok_or(Fail::Null)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn surfex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn surfex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_graph_from_graph6(text: *const c_char, out: *mut *mut SurfexGraph) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = graph6::decode(str_arg(text)?.trim())?;
        *out = Box::into_raw(Box::new(SurfexGraph(g)));
        Ok(())
    })
}

/// A member of EX(n, γ) with dominating pair 0, 1 and path 2, …, n−1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_construct_ex(n: usize, gamma: usize, out: *mut *mut SurfexGraph) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        let t = construct_ex(n, gamma)?;
        *out = Box::into_raw(Box::new(SurfexGraph(t.graph)));
        Ok(())
    })
}

/// K₂ ∇ K_{γ+3}^{n−2} for γ ∈ {1, 2} with an embedding of Euler genus γ.
///
/// # Safety
/// Both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_extremal_candidate(
    n: usize,
    gamma: usize,
    graph_out: *mut *mut SurfexGraph,
    scheme_out: *mut *mut SurfexScheme,
) -> SurfexStatus {
    guard(|| {
        let (go, so) = (out_arg(graph_out)?, out_arg(scheme_out)?);
        let (g, s) = build_extremal_candidates(n, gamma)?;
        *go = Box::into_raw(Box::new(SurfexGraph(g)));
        *so = Box::into_raw(Box::new(SurfexScheme(s)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn surfex_graph_free(g: *mut SurfexGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn surfex_graph_order(g: *const SurfexGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// Number of edges, 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn surfex_graph_size(g: *const SurfexGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.size())
}

/// # Safety
/// `g` must be a live handle; `out` must be writable. Free the result with
/// [`surfex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn surfex_graph_to_graph6(g: *const SurfexGraph, out: *mut *mut c_char) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = into_c_string(graph6::encode(graph_arg(g)?));
        Ok(())
    })
}

/// Spectral radius to relative residual `tol`.
///
/// # Safety
/// `g` must be a live handle; `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_spectral_radius(g: *const SurfexGraph, tol: f64, rho: *mut f64) -> SurfexStatus {
    guard(|| {
        let out = out_arg(rho)?;
        *out = spectral_radius(graph_arg(g)?, tol)?.rho;
        Ok(())
    })
}

/// Spectral radius of K₂ ∇ C_{n−2}.
///
/// # Safety
/// `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_rho0(n: usize, rho: *mut f64) -> SurfexStatus {
    guard(|| {
        *out_arg(rho)? = rho0(n)?;
        Ok(())
    })
}

/// Number of walks of length `l` as a decimal string.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable. Free the result with
/// [`surfex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn surfex_walk_count(g: *const SurfexGraph, l: usize, out: *mut *mut c_char) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        let p = walk_counts(graph_arg(g)?, l, WalkMode::Exact)?;
        let w = p.exact(l).expect("exact profile covers l");
        *out = into_c_string(w.to_string());
        Ok(())
    })
}

/// Whether `h` is a minor of `g`.
///
/// # Safety
/// Both handles must be live; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_has_minor(g: *const SurfexGraph, h: *const SurfexGraph, result: *mut bool) -> SurfexStatus {
    guard(|| {
        let out = out_arg(result)?;
        *out = has_minor(graph_arg(g)?, graph_arg(h)?)?;
        Ok(())
    })
}

/// Minimum Euler genus with the default search limits. `exact` is false
/// when the value came from annealing.
///
/// # Safety
/// `g` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_min_euler_genus(
    g: *const SurfexGraph,
    orientable_only: bool,
    genus: *mut usize,
    exact: *mut bool,
) -> SurfexStatus {
    guard(|| {
        let (go, eo) = (out_arg(genus)?, out_arg(exact)?);
        let r = min_euler_genus(graph_arg(g)?, orientable_only, &GenusLimits::default())?;
        *go = r.genus;
        *eo = r.exact;
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_scheme_from_json(json: *const c_char, out: *mut *mut SurfexScheme) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        let s = EmbeddingScheme::from_json(str_arg(json)?)?;
        *out = Box::into_raw(Box::new(SurfexScheme(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable. Free the result with
/// [`surfex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn surfex_scheme_to_json(s: *const SurfexScheme, out: *mut *mut c_char) -> SurfexStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = into_c_string(scheme_arg(s)?.to_json());
        Ok(())
    })
}

/// Face count, Euler genus and orientability of a scheme.
///
/// # Safety
/// `s` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfex_scheme_trace(
    s: *const SurfexScheme,
    faces: *mut usize,
    genus: *mut usize,
    orientable: *mut bool,
) -> SurfexStatus {
    guard(|| {
        let (fo, go, oo) = (out_arg(faces)?, out_arg(genus)?, out_arg(orientable)?);
        let t = trace_faces(scheme_arg(s)?)?;
        *fo = t.f;
        *go = t.genus;
        *oo = t.orientable;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn surfex_scheme_free(s: *mut SurfexScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
