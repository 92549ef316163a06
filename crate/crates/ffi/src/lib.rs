//! C ABI for cutforge.
//!
//! Graphs and groups are opaque handles created by `cf_*_new`/`cf_*_from_json`
//! and released with the matching `cf_*_free`. Every fallible call returns a
//! [`CfStatus`]; on failure, `cf_last_error_message` describes the error on
//! the calling thread. Reports are returned as JSON strings that the caller
//! releases with `cf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cutforge::bergman::{certified_bound, measure};
use cutforge::cuts::{Cut, Universe};
use cutforge::ends::{balanced_cut, ends_profile, stallings_pipeline};
use cutforge::graph::Graph;
use cutforge::group::{GroupOracle, GroupSpec};
use cutforge::io::{graph_from_json, graph_to_json};
use cutforge::sieve::{irr_of, SieveMode};
use cutforge::treeops::{build_t, build_u, NestedSystem};
use cutforge::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8, or an argument was out of range.
    InvalidArgument = 2,
    /// Malformed JSON, graph, group or cut input.
    Parse = 3,
    /// A mathematical precondition or verification failed.
    Verification = 4,
    /// A size cap was exceeded or the ball radius was too small.
    Cap = 5,
    Unsupported = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

/// A finite multigraph.
pub struct CfGraph(Graph);

/// A finitely generated group with a fixed generating set.
pub struct CfGroup(GroupOracle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Fallible<T> = Result<T, (CfStatus, String)>;

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse(_)
        | Error::MalformedGroup(_)
        | Error::DuplicateId(_)
        | Error::DanglingEndpoint(_)
        | Error::UnknownVertex(_)
        | Error::UnknownEdge(_) => CfStatus::Parse,
        Error::CapExceeded { .. } | Error::AtomCap { .. } | Error::GeneratorCap { .. } | Error::RadiusTooSmall(_) => {
            CfStatus::Cap
        }
        Error::Unsupported(_) => CfStatus::Unsupported,
        _ => CfStatus::Verification,
    }
}

fn lib<T>(r: cutforge::Result<T>) -> Fallible<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Fallible<()>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            CfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            CfStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Fallible<&'a str> {
    if p.is_null() {
        return Err((CfStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CfStatus::InvalidArgument, "argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Fallible<&'a T> {
    p.as_ref().ok_or_else(|| (CfStatus::NullPointer, "null handle".into()))
}

unsafe fn emit<T>(out: *mut *mut T, value: *mut T) -> Fallible<()> {
    if out.is_null() {
        return Err((CfStatus::NullPointer, "null output pointer".into()));
    }
    *out = value;
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Fallible<()> {
    if out.is_null() {
        return Err((CfStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(|_| (CfStatus::Internal, "interior NUL in output".into()))?.into_raw();
    Ok(())
}

fn json_value<T: serde::de::DeserializeOwned>(s: &str) -> Fallible<T> {
    serde_json::from_str(s).map_err(|e| (CfStatus::Parse, e.to_string()))
}

fn cuts_of(u: &Universe, cuts_json: &str) -> Fallible<Vec<Cut>> {
    let family: Vec<Vec<String>> = json_value(cuts_json)?;
    family.iter().map(|ids| lib(u.cut_by_ids(ids))).collect()
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).unwrap()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from `{"vertices": [...], "edges": [{"id", "src", "dst"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_from_json(json: *const c_char, out: *mut *mut CfGraph) -> CfStatus {
    guard(|| {
        let g = lib(graph_from_json(text(json)?))?;
        emit(out, Box::into_raw(Box::new(CfGraph(g))))
    })
}

/// # Safety
/// `g` must come from `cf_graph_from_json` and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_free(g: *mut CfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_counts(g: *const CfGraph, vertices: *mut usize, edges: *mut usize) -> CfStatus {
    guard(|| {
        let g = &handle(g)?.0;
        if vertices.is_null() || edges.is_null() {
            return Err((CfStatus::NullPointer, "null output pointer".into()));
        }
        *vertices = g.vertex_count();
        *edges = g.edge_count();
        Ok(())
    })
}

/// Creates a group from a shorthand (`zd:2`, `free:3`, `fp:2,3`, `cyclic:6`)
/// or a JSON specification.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_new(spec: *const c_char, out: *mut *mut CfGroup) -> CfStatus {
    guard(|| {
        let o = lib(GroupSpec::parse(text(spec)?).and_then(GroupOracle::new))?;
        emit(out, Box::into_raw(Box::new(CfGroup(o))))
    })
}

/// # Safety
/// `g` must come from `cf_group_new` and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_group_free(g: *mut CfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The Cayley ball of the given radius, as graph JSON.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_ball_json(group: *const CfGroup, radius: usize, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let ball = lib(handle(group)?.0.ball(radius))?;
        emit_string(out, graph_to_json(ball.graph()))
    })
}

/// Measure series of the cut given as a JSON array of vertex ids, through
/// degree `l`. Coefficients are decimal strings.
///
/// # Safety
/// `g` must be a live handle, `members_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_measure_json(
    g: *const CfGraph,
    members_json: *const c_char,
    l: usize,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let u = Universe::finite(handle(g)?.0.clone());
        let ids: Vec<String> = json_value(text(members_json)?)?;
        let a = lib(u.cut_by_ids(&ids))?;
        let s = lib(measure(&u, &a, l))?;
        emit_string(out, to_json(&s))
    })
}

/// Sieves the algebra generated by a JSON array of cuts (each an array of
/// vertex ids). `l = 0` selects the certified bound `4|V| + 1`.
///
/// # Safety
/// `g` must be a live handle, `cuts_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_sieve_json(
    g: *const CfGraph,
    cuts_json: *const c_char,
    l: usize,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let u = Universe::finite(handle(g)?.0.clone());
        let family = cuts_of(&u, text(cuts_json)?)?;
        let lstar = certified_bound(u.len());
        let l = if l == 0 { lstar } else { l };
        let mode = if l >= lstar { SieveMode::Certified } else { SieveMode::Truncated };
        let res = lib(irr_of(&u, &family, l, mode))?;
        let mut v = serde_json::to_value(&res).unwrap();
        let ids = |c: &Cut| -> Vec<String> { c.members().map(|x| u.graph().vertex_id(x).to_string()).collect() };
        v["irr"] = res.irr.iter().map(ids).collect::<Vec<_>>().into();
        emit_string(out, to_json(&v))
    })
}

/// Builds the structure tree of a nested family: `mode` is `'T'` or `'U'`.
/// The JSON carries vertices with labels, edges, and a `dot` rendering.
///
/// # Safety
/// `g` must be a live handle, `cuts_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_tree_json(
    g: *const CfGraph,
    cuts_json: *const c_char,
    mode: c_char,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let u = Universe::finite(handle(g)?.0.clone());
        let family = cuts_of(&u, text(cuts_json)?)?;
        let sys = lib(NestedSystem::verify(&u, family))?;
        let t = match mode as u8 {
            b'T' => lib(build_t(&sys))?,
            b'U' => lib(build_u(&sys))?,
            m => return Err((CfStatus::InvalidArgument, format!("mode must be 'T' or 'U', got {m}"))),
        };
        let mut v = t.to_json(&sys);
        v["dot"] = t.to_dot().into();
        emit_string(out, to_json(&v))
    })
}

/// Infinite-component profile for radii `1..rmax`.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_ends_profile_json(group: *const CfGroup, rmax: usize, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let p = lib(ends_profile(&handle(group)?.0, rmax))?;
        emit_string(out, to_json(&p))
    })
}

/// Splitting pipeline on the ball of radius `radius` with the balanced cut,
/// word bound `words` and truncation degree `l`.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_split_json(
    group: *const CfGroup,
    radius: usize,
    words: usize,
    l: usize,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let ball = lib(handle(group)?.0.ball(radius))?;
        let cut = lib(balanced_cut(&ball))?;
        let report = lib(stallings_pipeline(&ball, &cut, words, l))?;
        emit_string(out, to_json(&report))
    })
}
