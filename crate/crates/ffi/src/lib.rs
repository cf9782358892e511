//! C interface to `petri-homology`.
//!
//! Objects are opaque handles created by `ph_*` constructors and released by
//! the matching `*_free`. Every fallible call returns a [`PhStatus`]; on
//! failure `ph_last_error_message` describes the error for the calling
//! thread. Strings returned through out-pointers are owned by the caller and
//! released with `ph_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use petri_homology::homology::{self, Endpoint, HomologyGroup};
use petri_homology::net::{explore, ElementaryNet, Mode, StateSpace};
use petri_homology::netfile::{emit_net, parse_net};
use petri_homology::pipelines::{make_pipeline, verify_theorems, PipelineSpec, Variant};
use petri_homology::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    ResourceCap = 4,
    InvalidArgument = 5,
    OutOfRange = 6,
    Overflow = 7,
    CheckFailed = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhMode {
    Reachable = 0,
    AllStates = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhVariant {
    P = 0,
    N = 1,
    NPrime = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhEndpoint {
    Initial = 0,
    Final = 1,
}

pub struct PhNet(Arc<ElementaryNet>);

pub struct PhStateSpace(StateSpace);

pub struct PhHomology(Vec<HomologyGroup>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (PhStatus, String);

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PhStatus {
    match e {
        Error::Parse(_) => PhStatus::Parse,
        Error::StateCapExceeded { .. } => PhStatus::ResourceCap,
        Error::InvalidPipeline(_) => PhStatus::InvalidArgument,
        _ => PhStatus::Internal,
    }
}

fn lib(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PhStatus {
    let (status, message) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (PhStatus::Ok, String::new()),
        Ok(Err(failure)) => failure,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (PhStatus::Internal, format!("internal error: {text}"))
        }
    };
    set_last_error(&message);
    status
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| (PhStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| (PhStatus::NullPointer, "output pointer is null".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((PhStatus::NullPointer, "string is null".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (PhStatus::InvalidUtf8, e.to_string()))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| (PhStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next `ph_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ph_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a net document.
///
/// # Safety
/// `document` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_net_parse(document: *const c_char, out_net: *mut *mut PhNet) -> PhStatus {
    guard(|| {
        let slot = out(out_net)?;
        *slot = ptr::null_mut();
        let net = parse_net(text(document)?).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PhNet(Arc::new(net))));
        Ok(())
    })
}

/// Builds the pipeline net `P_n`, `N_n` or `N'_n`.
///
/// # Safety
/// `out_net` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_net_pipeline(n: usize, variant: PhVariant, out_net: *mut *mut PhNet) -> PhStatus {
    guard(|| {
        let slot = out(out_net)?;
        *slot = ptr::null_mut();
        let variant = match variant {
            PhVariant::P => Variant::P,
            PhVariant::N => Variant::N,
            PhVariant::NPrime => Variant::NPrime,
        };
        let net = make_pipeline(PipelineSpec::new(n, variant)).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PhNet(Arc::new(net))));
        Ok(())
    })
}

/// Writes `net` in the document format accepted by `ph_net_parse`.
///
/// # Safety
/// `net` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_net_emit(net: *const PhNet, out_text: *mut *mut c_char) -> PhStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = ptr::null_mut();
        *slot = owned_string(emit_net(&handle(net, "net")?.0))?;
        Ok(())
    })
}

/// # Safety
/// `net` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_net_place_count(net: *const PhNet, out_count: *mut usize) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(net, "net")?.0.place_count();
        Ok(())
    })
}

/// # Safety
/// `net` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_net_event_count(net: *const PhNet, out_count: *mut usize) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(net, "net")?.0.event_count();
        Ok(())
    })
}

/// # Safety
/// `net` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_net_free(net: *mut PhNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Explores the state space of `net`, failing with `RESOURCE_CAP` past
/// `max_states` states. The space keeps its own reference to the net.
///
/// # Safety
/// `net` must be a live handle and `out_space` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_state_space_explore(
    net: *const PhNet,
    mode: PhMode,
    max_states: usize,
    out_space: *mut *mut PhStateSpace,
) -> PhStatus {
    guard(|| {
        let slot = out(out_space)?;
        *slot = ptr::null_mut();
        let mode = match mode {
            PhMode::Reachable => Mode::Reachable,
            PhMode::AllStates => Mode::AllStates,
        };
        let space = explore(handle(net, "net")?.0.clone(), mode, max_states).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PhStateSpace(space)));
        Ok(())
    })
}

/// # Safety
/// `space` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_state_space_count(space: *const PhStateSpace, out_count: *mut usize) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(space, "state space")?.0.len();
        Ok(())
    })
}

/// # Safety
/// `space` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_state_space_deadlock_count(
    space: *const PhStateSpace,
    out_count: *mut usize,
) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(space, "state space")?.0.deadlocks().len();
        Ok(())
    })
}

/// # Safety
/// `space` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_state_space_sender_count(
    space: *const PhStateSpace,
    out_count: *mut usize,
) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(space, "state space")?.0.senders().len();
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_state_space_free(space: *mut PhStateSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Integral homology of the cube complex of `space`.
///
/// # Safety
/// `space` must be a live handle and `out_homology` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_ordinary(
    space: *const PhStateSpace,
    out_homology: *mut *mut PhHomology,
) -> PhStatus {
    guard(|| {
        let slot = out(out_homology)?;
        *slot = ptr::null_mut();
        let groups = homology::space_homology(&handle(space, "state space")?.0).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PhHomology(groups)));
        Ok(())
    })
}

/// Directed homology for the initial or final endpoint.
///
/// # Safety
/// `space` must be a live handle and `out_homology` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_directed(
    space: *const PhStateSpace,
    endpoint: PhEndpoint,
    out_homology: *mut *mut PhHomology,
) -> PhStatus {
    guard(|| {
        let slot = out(out_homology)?;
        *slot = ptr::null_mut();
        let endpoint = match endpoint {
            PhEndpoint::Initial => Endpoint::Initial,
            PhEndpoint::Final => Endpoint::Final,
        };
        let groups = homology::directed_homology(&handle(space, "state space")?.0, endpoint).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PhHomology(groups)));
        Ok(())
    })
}

/// Number of computed degrees. Groups beyond it are zero.
///
/// # Safety
/// `h` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_degree_count(h: *const PhHomology, out_count: *mut usize) -> PhStatus {
    guard(|| {
        *out(out_count)? = handle(h, "homology")?.0.len();
        Ok(())
    })
}

/// Free rank of `H_degree`.
///
/// # Safety
/// `h` must be a live handle and `out_betti` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_betti(
    h: *const PhHomology,
    degree: usize,
    out_betti: *mut usize,
) -> PhStatus {
    guard(|| {
        *out(out_betti)? = homology::degree(&handle(h, "homology")?.0, degree).betti;
        Ok(())
    })
}

/// Number of torsion coefficients of `H_degree`.
///
/// # Safety
/// `h` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_torsion_count(
    h: *const PhHomology,
    degree: usize,
    out_count: *mut usize,
) -> PhStatus {
    guard(|| {
        *out(out_count)? = homology::degree(&handle(h, "homology")?.0, degree).torsion.len();
        Ok(())
    })
}

/// The `index`-th torsion coefficient of `H_degree`; `OVERFLOW` if it does
/// not fit in 64 bits.
///
/// # Safety
/// `h` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_torsion(
    h: *const PhHomology,
    degree: usize,
    index: usize,
    out_value: *mut u64,
) -> PhStatus {
    guard(|| {
        let slot = out(out_value)?;
        let g = homology::degree(&handle(h, "homology")?.0, degree);
        let t = g.torsion.get(index).ok_or_else(|| {
            (
                PhStatus::OutOfRange,
                format!("H_{degree} has {} torsion coefficients", g.torsion.len()),
            )
        })?;
        *slot = u64::try_from(t).map_err(|_| (PhStatus::Overflow, format!("{t} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Renders the groups as `H_0 = Z, H_1 = Z ⊕ Z/2, ...` (UTF-8).
///
/// # Safety
/// `h` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_render(h: *const PhHomology, out_text: *mut *mut c_char) -> PhStatus {
    guard(|| {
        let slot = out(out_text)?;
        *slot = ptr::null_mut();
        let groups = &handle(h, "homology")?.0;
        let s = groups
            .iter()
            .enumerate()
            .map(|(k, g)| format!("H_{k} = {g}"))
            .collect::<Vec<_>>()
            .join(", ");
        *slot = owned_string(s)?;
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ph_homology_free(h: *mut PhHomology) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs the pipeline checks for `n = 2..=n_max`. Returns `CHECK_FAILED` if
/// any check fails; `out_failed` (may be null) receives the failure count.
///
/// # Safety
/// `out_failed` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_verify_theorems(
    n_max: usize,
    max_states: usize,
    out_failed: *mut usize,
) -> PhStatus {
    guard(|| {
        let report = verify_theorems(n_max, max_states).map_err(lib)?;
        let failed = report.failures().count();
        if let Some(slot) = out_failed.as_mut() {
            *slot = failed;
        }
        let first = report.failures().next().map(ToString::to_string);
        match first {
            None => Ok(()),
            Some(first) => Err((
                PhStatus::CheckFailed,
                format!("{failed} checks failed, first: {first}"),
            )),
        }
    })
}
