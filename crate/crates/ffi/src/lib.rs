//! C ABI over `qmac`.
//!
//! Every function returns a [`QmacStatus`] and writes results through out
//! pointers. Ensembles and regions are opaque handles owned by the caller
//! and released with the matching `_free` function. After a non-OK status,
//! [`qmac_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qmac::coding::{self, Codebook, CodebookSpec};
use qmac::entropy::conditional_entropies;
use qmac::region::{self, RatePair, RateRegion, SamplerPlan};
use qmac::superdense::{entanglement_entropy, SchmidtState};
use qmac::{Error, SignalEnsemble};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidInput = 4,
    ComputationError = 5,
    DimensionCapExceeded = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmacEntropyProfile {
    pub h_joint: f64,
    pub h_cond_a: f64,
    pub h_cond_b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmacRatePair {
    pub r1: f64,
    pub r2: f64,
}

impl From<RatePair> for QmacRatePair {
    fn from(r: RatePair) -> Self {
        QmacRatePair { r1: r.r1, r2: r.r2 }
    }
}

impl From<QmacRatePair> for RatePair {
    fn from(r: QmacRatePair) -> Self {
        RatePair::new(r.r1, r.r2)
    }
}

/// Opaque signal ensemble.
pub struct QmacEnsemble {
    inner: SignalEnsemble,
}

/// Opaque convex rate region.
pub struct QmacRegion {
    inner: RateRegion,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> QmacStatus {
    match err {
        Error::DimensionCapExceeded { .. } => QmacStatus::DimensionCapExceeded,
        e if e.is_input_error() => QmacStatus::InvalidInput,
        _ => QmacStatus::ComputationError,
    }
}

type FfiResult = std::result::Result<(), QmacStatus>;

fn fail(status: QmacStatus, msg: impl Into<String>) -> QmacStatus {
    set_error(msg);
    status
}

fn lib(err: Error) -> QmacStatus {
    fail(status_of(&err), err.to_string())
}

/// Runs `f`, turning panics into [`QmacStatus::Panic`].
fn guard(f: impl FnOnce() -> FfiResult) -> QmacStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmacStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(QmacStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> std::result::Result<&'a str, QmacStatus> {
    if ptr.is_null() {
        return Err(fail(QmacStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(QmacStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(ptr: *const T, what: &str) -> std::result::Result<&'a T, QmacStatus> {
    ptr.as_ref().ok_or_else(|| fail(QmacStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(ptr: *mut T, what: &str) -> std::result::Result<&'a mut T, QmacStatus> {
    ptr.as_mut().ok_or_else(|| fail(QmacStatus::NullPointer, format!("{what} is null")))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `qmac_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qmac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qmac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates an ensemble from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle to release with [`qmac_ensemble_free`].
#[no_mangle]
pub unsafe extern "C" fn qmac_ensemble_from_json(json: *const c_char, out: *mut *mut QmacEnsemble) -> QmacStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let inner: SignalEnsemble =
            serde_json::from_str(text).map_err(|e| fail(QmacStatus::InvalidJson, e.to_string()))?;
        inner.ensure_valid().map_err(lib)?;
        *out = Box::into_raw(Box::new(QmacEnsemble { inner }));
        Ok(())
    })
}

/// The four-state qubit ensemble `|0>, |1>, |+>, |->` with uniform letters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_ensemble_two_basis_example(out: *mut *mut QmacEnsemble) -> QmacStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(QmacEnsemble {
            inner: qmac::ensemble::two_basis_qubit_example(),
        }));
        Ok(())
    })
}

/// # Safety
/// `ensemble` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qmac_ensemble_free(ensemble: *mut QmacEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// `H(rho)`, `H_A` and `H_B` in bits.
///
/// # Safety
/// `ensemble` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_entropy_profile(
    ensemble: *const QmacEnsemble,
    out: *mut QmacEntropyProfile,
) -> QmacStatus {
    guard(|| {
        let e = ref_arg(ensemble, "ensemble")?;
        let out = out_arg(out, "out")?;
        let p = conditional_entropies(&e.inner).map_err(lib)?;
        *out = QmacEntropyProfile {
            h_joint: p.h_joint,
            h_cond_a: p.h_cond_a,
            h_cond_b: p.h_cond_b,
        };
        Ok(())
    })
}

/// Pentagon of the ensemble's own letter distributions.
///
/// # Safety
/// `ensemble` must be a live handle and `out` a valid pointer. On success
/// `*out` must be released with [`qmac_region_free`].
#[no_mangle]
pub unsafe extern "C" fn qmac_region_pentagon(ensemble: *const QmacEnsemble, out: *mut *mut QmacRegion) -> QmacStatus {
    guard(|| {
        let e = ref_arg(ensemble, "ensemble")?;
        let out = out_arg(out, "out")?;
        let profile = conditional_entropies(&e.inner).map_err(lib)?;
        let inner = region::pentagon(&profile).map_err(lib)?;
        *out = Box::into_raw(Box::new(QmacRegion { inner }));
        Ok(())
    })
}

/// Convex hull of the pentagons over a grid of product distributions with
/// spacing `grid_step` (which must divide 1).
///
/// # Safety
/// As [`qmac_region_pentagon`].
#[no_mangle]
pub unsafe extern "C" fn qmac_region_union_grid(
    ensemble: *const QmacEnsemble,
    grid_step: f64,
    out: *mut *mut QmacRegion,
) -> QmacStatus {
    guard(|| {
        let e = ref_arg(ensemble, "ensemble")?;
        let out = out_arg(out, "out")?;
        let inner = region::region_union(&e.inner, &SamplerPlan::grid(grid_step)).map_err(lib)?;
        *out = Box::into_raw(Box::new(QmacRegion { inner }));
        Ok(())
    })
}

/// # Safety
/// `region` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qmac_region_free(region: *mut QmacRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `region` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmac_region_vertex_count(region: *const QmacRegion) -> usize {
    region.as_ref().map_or(0, |r| r.inner.vertices().len())
}

/// Copies the counterclockwise vertex list into `buffer`. `*written` is
/// always set to the vertex count; [`QmacStatus::BufferTooSmall`] is returned
/// when `capacity` is below it.
///
/// # Safety
/// `region` must be a live handle, `buffer` must point to `capacity`
/// writable elements (or be null when `capacity` is 0) and `written` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_region_vertices(
    region: *const QmacRegion,
    buffer: *mut QmacRatePair,
    capacity: usize,
    written: *mut usize,
) -> QmacStatus {
    guard(|| {
        let r = ref_arg(region, "region")?;
        let written = out_arg(written, "written")?;
        let v = r.inner.vertices();
        *written = v.len();
        if capacity < v.len() {
            return Err(fail(
                QmacStatus::BufferTooSmall,
                format!("{} vertices, buffer holds {capacity}", v.len()),
            ));
        }
        if v.is_empty() {
            return Ok(());
        }
        if buffer.is_null() {
            return Err(fail(QmacStatus::NullPointer, "buffer is null"));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, v.len());
        for (d, s) in dst.iter_mut().zip(v) {
            *d = (*s).into();
        }
        Ok(())
    })
}

/// # Safety
/// `region` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_region_contains(
    region: *const QmacRegion,
    rate: QmacRatePair,
    tol: f64,
    out: *mut bool,
) -> QmacStatus {
    guard(|| {
        let r = ref_arg(region, "region")?;
        let out = out_arg(out, "out")?;
        *out = region::contains(&r.inner, rate.into(), tol);
        Ok(())
    })
}

/// # Safety
/// `region` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_region_area(region: *const QmacRegion, out: *mut f64) -> QmacStatus {
    guard(|| {
        let r = ref_arg(region, "region")?;
        *out_arg(out, "out")? = r.inner.area();
        Ok(())
    })
}

/// `lambda * a + (1 - lambda) * b` for `lambda` in `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_time_share(
    a: QmacRatePair,
    b: QmacRatePair,
    lambda: f64,
    out: *mut QmacRatePair,
) -> QmacStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = region::time_share(a.into(), b.into(), lambda).map_err(lib)?.into();
        Ok(())
    })
}

/// Exact error probability of the two-stage decoder on a codebook given as
/// JSON `{"length_L": L, "alice_strings": [...], "bob_strings": [...]}`.
/// A `dimension_cap` of 0 selects the default cap.
///
/// # Safety
/// `ensemble` must be a live handle, `codebook_json` a NUL-terminated string
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmac_error_probability(
    ensemble: *const QmacEnsemble,
    codebook_json: *const c_char,
    delta: f64,
    dimension_cap: usize,
    out: *mut f64,
) -> QmacStatus {
    guard(|| {
        let e = ref_arg(ensemble, "ensemble")?;
        let text = str_arg(codebook_json, "codebook_json")?;
        let out = out_arg(out, "out")?;
        let spec: CodebookSpec =
            serde_json::from_str(text).map_err(|err| fail(QmacStatus::InvalidJson, err.to_string()))?;
        let cb = Codebook::from_spec(&spec, &e.inner).map_err(lib)?;
        let cap = if dimension_cap == 0 {
            coding::DEFAULT_DIM_CAP
        } else {
            dimension_cap
        };
        *out = coding::error_probability(&e.inner, &cb, delta, cap).map_err(lib)?.p_error;
        Ok(())
    })
}

/// Entanglement entropy of `sum_i a_i |i>|i>` from the `n` Schmidt
/// amplitudes `a_i` (squares summing to 1).
///
/// # Safety
/// `amplitudes` must point to `n` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qmac_entanglement_entropy(amplitudes: *const f64, n: usize, out: *mut f64) -> QmacStatus {
    guard(|| {
        if amplitudes.is_null() {
            return Err(fail(QmacStatus::NullPointer, "amplitudes is null"));
        }
        let out = out_arg(out, "out")?;
        let a = std::slice::from_raw_parts(amplitudes, n).to_vec();
        let state = SchmidtState::new(a).map_err(lib)?;
        *out = entanglement_entropy(&state);
        Ok(())
    })
}
