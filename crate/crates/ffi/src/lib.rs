//! C bindings. Every fallible call returns a [`CoamoebaStatus`]; on failure
//! [`coamoeba_last_error_message`] describes the last error on the calling
//! thread. Handles are opaque and must be released with their `_free`
//! function; strings returned through out-parameters are released with
//! [`coamoeba_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use coamoeba_core::ainfinity::{check_a_infinity, AInfCategory};
use coamoeba_core::beilinson::build_exterior_category;
use coamoeba_core::coamoeba::{build_coamoeba, category_of, quotient_by_sublattice, Sublattice};
use coamoeba_core::permutohedron::mesh::{export_mesh, MeshFormat};
use coamoeba_core::permutohedron::TorusTessellation;
use coamoeba_core::verify::{build_delta_category, run_verification, ComparisonReport};
use coamoeba_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoamoebaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedDimension = 3,
    NotFiniteIndex = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoamoebaCategoryKind {
    Exterior = 0,
    Coamoeba = 1,
    /// Delta objects on the window `0..=2n+1`.
    Delta = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoamoebaMeshFormat {
    Off = 0,
    Obj = 1,
    Json = 2,
}

/// Opaque category handle.
pub struct CoamoebaCategory(AInfCategory);

/// Opaque verification report handle.
pub struct CoamoebaReport(ComparisonReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CoamoebaStatus {
    match e {
        Error::UnsupportedDimension(_) => CoamoebaStatus::UnsupportedDimension,
        Error::NotFiniteIndex => CoamoebaStatus::NotFiniteIndex,
        Error::InvalidArgument(_) | Error::DimensionMismatch(_) | Error::WindowTooSmall { .. } => {
            CoamoebaStatus::InvalidArgument
        }
        _ => CoamoebaStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CoamoebaStatus, String)>) -> CoamoebaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CoamoebaStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("panic inside the library");
            CoamoebaStatus::Internal
        }
    }
}

fn lift<T>(r: coamoeba_core::Result<T>) -> Result<T, (CoamoebaStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (CoamoebaStatus, String) {
    (CoamoebaStatus::NullPointer, "null pointer argument".to_string())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread; empty after a
/// successful call. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn coamoeba_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_build(
    kind: CoamoebaCategoryKind,
    n: usize,
    out: *mut *mut CoamoebaCategory,
) -> CoamoebaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cat = lift(match kind {
            CoamoebaCategoryKind::Exterior => build_exterior_category(n),
            CoamoebaCategoryKind::Coamoeba => build_coamoeba(n).and_then(|g| category_of(&g)),
            CoamoebaCategoryKind::Delta => build_delta_category(n, 0, 2 * n as i64 + 1),
        })?;
        *out = Box::into_raw(Box::new(CoamoebaCategory(cat)));
        Ok(())
    })
}

/// Quotient category for the sublattice spanned by `count` vectors of
/// length `n`, stored row by row in `basis`.
///
/// # Safety
/// `basis` must point to `count * n` integers and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_quotient(
    n: usize,
    basis: *const i64,
    count: usize,
    out: *mut *mut CoamoebaCategory,
) -> CoamoebaStatus {
    guard(|| {
        if out.is_null() || (basis.is_null() && count > 0) {
            return Err(null());
        }
        let flat: &[i64] = if count == 0 { &[] } else { std::slice::from_raw_parts(basis, count * n) };
        let gens: Vec<Vec<i64>> = flat.chunks(n.max(1)).map(<[i64]>::to_vec).collect();
        let g = lift(build_coamoeba(n))?;
        let sub = lift(Sublattice::from_generators(&gens, n))?;
        let (cat, _) = lift(quotient_by_sublattice(&g, &sub))?;
        *out = Box::into_raw(Box::new(CoamoebaCategory(cat)));
        Ok(())
    })
}

/// # Safety
/// `cat` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_object_count(cat: *const CoamoebaCategory) -> usize {
    cat.as_ref().map_or(0, |c| c.0.num_objects())
}

/// Dimension of `hom(src, tgt)`; 0 for out-of-range indices.
///
/// # Safety
/// `cat` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_hom_dim(cat: *const CoamoebaCategory, src: usize, tgt: usize) -> usize {
    cat.as_ref().map_or(0, |c| c.0.hom_dim(src, tgt))
}

/// # Safety
/// `cat` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_to_json(cat: *const CoamoebaCategory, out: *mut *mut c_char) -> CoamoebaStatus {
    guard(|| {
        let (Some(c), false) = (cat.as_ref(), out.is_null()) else { return Err(null()) };
        *out = into_c_string(c.0.to_json_string());
        Ok(())
    })
}

/// Counts violations of the A-infinity relations up to `max_arity`.
///
/// # Safety
/// `cat` must be a live handle; `violations` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_check(
    cat: *const CoamoebaCategory,
    max_arity: usize,
    violations: *mut usize,
) -> CoamoebaStatus {
    guard(|| {
        let (Some(c), false) = (cat.as_ref(), violations.is_null()) else { return Err(null()) };
        *violations = check_a_infinity(&c.0, max_arity).violations.len();
        Ok(())
    })
}

/// # Safety
/// `cat` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_category_free(cat: *mut CoamoebaCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Runs the comparison pipeline for one `n`. A mismatch is not an error:
/// inspect the report with [`coamoeba_report_passed`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_verify(n: usize, out: *mut *mut CoamoebaReport) -> CoamoebaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let r = lift(run_verification(n))?;
        *out = Box::into_raw(Box::new(CoamoebaReport(r)));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_report_passed(report: *const CoamoebaReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.passed())
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_report_json(report: *const CoamoebaReport, out: *mut *mut c_char) -> CoamoebaStatus {
    guard(|| {
        let (Some(r), false) = (report.as_ref(), out.is_null()) else { return Err(null()) };
        *out = into_c_string(r.0.to_json_string());
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_report_free(report: *mut CoamoebaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Mesh or face-lattice export of the torus tessellation.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coamoeba_tessellation_export(
    n: usize,
    format: CoamoebaMeshFormat,
    cover_patch: bool,
    out: *mut *mut c_char,
) -> CoamoebaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let t = lift(TorusTessellation::build(n))?;
        let fmt = match format {
            CoamoebaMeshFormat::Off => MeshFormat::Off,
            CoamoebaMeshFormat::Obj => MeshFormat::Obj,
            CoamoebaMeshFormat::Json => MeshFormat::Json,
        };
        let (text, _) = lift(export_mesh(&t, fmt, cover_patch))?;
        *out = into_c_string(text);
        Ok(())
    })
}
