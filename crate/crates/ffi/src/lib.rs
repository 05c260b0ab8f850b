//! C ABI over `apointlab`.
//!
//! Every fallible call returns an [`ApStatus`]; results go through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`ap_last_error`]. Objects are opaque handles that must be released with
//! their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apointlab::apoints::{APointSet, SearchParams};
use apointlab::complexfn::{delta, zeta};
use apointlab::dirichlet::{dirichlet_inverse, lambda_a, psi, sigma_star, DirichletSeries};
use apointlab::{ComplexValue, EvalParams, Error};

/// Status codes shared by all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Pole = 3,
    OutOfRange = 4,
    Numerical = 5,
    NotSupported = 6,
    Io = 7,
    Panic = 99,
}

/// A complex number as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApComplex {
    pub re: f64,
    pub im: f64,
}

/// One a-point `beta + i gamma` with its residual `|zeta(rho) - a|`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApPoint {
    pub beta: f64,
    pub gamma: f64,
    pub residual: f64,
}

/// Opaque list of a-points.
pub struct ApPointSet(APointSet);

/// Opaque truncated Dirichlet series.
pub struct ApSeries(DirichletSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ApStatus {
    match e {
        Error::PoleAtOne
        | Error::PoleAtNonpositiveInteger(_)
        | Error::PoleAtOddInteger(_)
        | Error::NearSingularity(_) => ApStatus::Pole,
        Error::RangeExceeded { .. } | Error::TooSmallT { .. } | Error::InsufficientPoints { .. } => {
            ApStatus::OutOfRange
        }
        Error::NonFinite(_)
        | Error::BoundaryTooClose { .. }
        | Error::NonIntegralWinding { .. }
        | Error::RefinementDiverged(_)
        | Error::WindowCountMismatch { .. }
        | Error::QuadratureNotConverged { .. } => ApStatus::Numerical,
        Error::ACaseOne | Error::ACaseZero => ApStatus::NotSupported,
        Error::Io(_) => ApStatus::Io,
        _ => ApStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status and message.
fn guard(f: impl FnOnce() -> Result<(), (ApStatus, String)>) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ApStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside apointlab".into());
            ApStatus::Panic
        }
    }
}

fn lib<T>(r: apointlab::Result<T>) -> Result<T, (ApStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (ApStatus, String) {
    (ApStatus::NullPointer, "null pointer argument".into())
}

fn cv(z: ApComplex) -> ComplexValue {
    ComplexValue::new(z.re, z.im)
}

fn ap(z: ComplexValue) -> ApComplex {
    ApComplex { re: z.re, im: z.im }
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ap_status_name(status: ApStatus) -> *const c_char {
    let name: &'static CStr = match status {
        ApStatus::Ok => c"ok",
        ApStatus::NullPointer => c"null pointer",
        ApStatus::InvalidArgument => c"invalid argument",
        ApStatus::Pole => c"pole",
        ApStatus::OutOfRange => c"out of range",
        ApStatus::Numerical => c"numerical failure",
        ApStatus::NotSupported => c"not supported",
        ApStatus::Io => c"i/o error",
        ApStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// `zeta(s)` with default evaluation parameters.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_zeta(s: ApComplex, out: *mut ApComplex) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        *out = ap(lib(zeta(cv(s), &EvalParams::default()))?);
        Ok(())
    })
}

/// `Delta(s) = 2 (2 pi)^(s-1) sin(pi s / 2) Gamma(1 - s)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_delta(s: ApComplex, out: *mut ApComplex) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        *out = ap(lib(delta(cv(s)))?);
        Ok(())
    })
}

/// Chebyshev `psi(x)`; zero for `x < 2`.
#[no_mangle]
pub extern "C" fn ap_psi(x: f64) -> f64 {
    psi(x)
}

/// The `sigma > 1` with `zeta(sigma) - 1 = |a - 1|`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_sigma_star(a: ApComplex, out: *mut f64) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        *out = lib(sigma_star(cv(a)))?;
        Ok(())
    })
}

/// All a-points with `0 < gamma <= t_max` in the default search window.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// to be released with `ap_point_set_free`.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_compute(a: ApComplex, t_max: f64, out: *mut *mut ApPointSet) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        let mut set = lib(APointSet::compute(cv(a), t_max, &EvalParams::default(), &SearchParams::default()))?;
        set.points.retain(|p| p.gamma <= t_max);
        *out = Box::into_raw(Box::new(ApPointSet(set)));
        Ok(())
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_len(set: *const ApPointSet) -> usize {
    unsafe { set.as_ref() }.map_or(0, |s| s.0.points.len())
}

/// Point `index` in ascending ordinate order.
///
/// # Safety
/// `set` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_get(set: *const ApPointSet, index: usize, out: *mut ApPoint) -> ApStatus {
    guard(|| {
        let set = unsafe { set.as_ref() }.ok_or_else(null)?;
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        let p = set.0.points.get(index).ok_or_else(|| {
            (ApStatus::OutOfRange, format!("index {index} beyond {} points", set.0.points.len()))
        })?;
        *out = ApPoint {
            beta: p.beta,
            gamma: p.gamma,
            residual: p.residual,
        };
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_point_set_free(set: *mut ApPointSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Coefficients `Lambda_a(1..=len)` of `zeta'(s) / (zeta(s) - a)`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// to be released with `ap_series_free`.
#[no_mangle]
pub unsafe extern "C" fn ap_lambda_a(len: usize, a: ApComplex, out: *mut *mut ApSeries) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        *out = Box::into_raw(Box::new(ApSeries(lib(lambda_a(len, cv(a)))?)));
        Ok(())
    })
}

/// A series from `len` coefficients `c_1 .. c_len`.
///
/// # Safety
/// `coeffs` must be valid for `len` reads; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_series_new(coeffs: *const ApComplex, len: usize, out: *mut *mut ApSeries) -> ApStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        if coeffs.is_null() {
            return Err(null());
        }
        let raw = unsafe { std::slice::from_raw_parts(coeffs, len) };
        let series = lib(DirichletSeries::new(raw.iter().map(|&z| cv(z)).collect()))?;
        *out = Box::into_raw(Box::new(ApSeries(series)));
        Ok(())
    })
}

/// Dirichlet inverse of `series` as a new handle.
///
/// # Safety
/// `series` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_series_inverse(series: *const ApSeries, out: *mut *mut ApSeries) -> ApStatus {
    guard(|| {
        let series = unsafe { series.as_ref() }.ok_or_else(null)?;
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        *out = Box::into_raw(Box::new(ApSeries(lib(dirichlet_inverse(&series.0))?)));
        Ok(())
    })
}

/// Number of coefficients, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_series_len(series: *const ApSeries) -> usize {
    unsafe { series.as_ref() }.map_or(0, |s| s.0.len())
}

/// Coefficient `c_n` for `1 <= n <= len`.
///
/// # Safety
/// `series` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_series_coeff(series: *const ApSeries, n: usize, out: *mut ApComplex) -> ApStatus {
    guard(|| {
        let series = unsafe { series.as_ref() }.ok_or_else(null)?;
        let out = unsafe { out.as_mut() }.ok_or_else(null)?;
        if n == 0 || n > series.0.len() {
            return Err((ApStatus::OutOfRange, format!("n = {n} outside 1..={}", series.0.len())));
        }
        *out = ap(series.0.coeff(n));
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_series_free(series: *mut ApSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}
