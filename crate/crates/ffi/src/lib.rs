//! C ABI over the qctrl controllability library.
//!
//! Conventions: every function returns a `QctrlStatus`; results come back
//! through out-pointers. A `QctrlSystem` is an opaque handle created by
//! `qctrl_system_new` and released by `qctrl_system_free`. Strings returned
//! through out-pointers are NUL-terminated, allocated by this library, and
//! must be released with `qctrl_string_free`. All entry points catch panics
//! and convert them to `QCTRL_STATUS_INTERNAL`.

use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qctrl::closure::closure;
use qctrl::criteria::{full_verdict, Conclusion};
use qctrl::io::{run_check, SpecFile};
use qctrl::system::{build_h0, build_h1, DerivedParams, SystemSpec};

/// Status code returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QctrlStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArg = 1,
    /// The level/dipole arrays do not describe a valid system.
    InvalidSpec = 2,
    /// A tolerance was not positive and finite.
    InvalidTolerance = 3,
    /// Internal error (panic caught at the boundary).
    Internal = 4,
}

/// Controllability verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QctrlVerdict {
    /// The dynamical Lie algebra is all of u(N).
    CompletelyControllable = 0,
    /// The algebra is su(N); controllable up to a global phase.
    ControllableUpToPhase = 1,
    NotControllable = 2,
    /// No rule fired; run the closure oracle for a definite answer.
    Undetermined = 3,
}

impl From<Conclusion> for QctrlVerdict {
    fn from(c: Conclusion) -> Self {
        match c {
            Conclusion::CompletelyControllable => QctrlVerdict::CompletelyControllable,
            Conclusion::ControllableUpToPhase => QctrlVerdict::ControllableUpToPhase,
            Conclusion::NotControllable => QctrlVerdict::NotControllable,
            Conclusion::Undetermined => QctrlVerdict::Undetermined,
        }
    }
}

/// Opaque handle to an N-level system description.
pub struct QctrlSystem {
    spec: SystemSpec,
}

fn guard(f: impl FnOnce() -> QctrlStatus) -> QctrlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QctrlStatus::Internal)
}

fn valid_eps(eps: f64) -> bool {
    eps > 0.0 && eps.is_finite()
}

/// Create a system from `num_levels` energies and `num_levels - 1` adjacent
/// transition dipoles. On success `*out` owns the new handle.
///
/// # Safety
/// `levels` must point to `num_levels` doubles, `dipoles` to
/// `num_levels - 1` doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qctrl_system_new(
    levels: *const f64,
    num_levels: usize,
    dipoles: *const f64,
    out: *mut *mut QctrlSystem,
) -> QctrlStatus {
    guard(|| {
        if levels.is_null() || dipoles.is_null() || out.is_null() || num_levels < 2 {
            return if out.is_null() || levels.is_null() || dipoles.is_null() {
                QctrlStatus::NullArg
            } else {
                QctrlStatus::InvalidSpec
            };
        }
        let levels = slice::from_raw_parts(levels, num_levels).to_vec();
        let dipoles = slice::from_raw_parts(dipoles, num_levels - 1).to_vec();
        match SystemSpec::new(levels, dipoles) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(QctrlSystem { spec }));
                QctrlStatus::Ok
            }
            Err(_) => QctrlStatus::InvalidSpec,
        }
    })
}

/// Release a handle created by `qctrl_system_new`. NULL is a no-op.
///
/// # Safety
/// `system` must be NULL or a pointer previously returned by
/// `qctrl_system_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qctrl_system_free(system: *mut QctrlSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Run the rule engine and store the verdict in `*out_verdict`.
///
/// # Safety
/// `system` and `out_verdict` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qctrl_verdict(
    system: *const QctrlSystem,
    eps_param: f64,
    out_verdict: *mut QctrlVerdict,
) -> QctrlStatus {
    guard(|| {
        if system.is_null() || out_verdict.is_null() {
            return QctrlStatus::NullArg;
        }
        if !valid_eps(eps_param) {
            return QctrlStatus::InvalidTolerance;
        }
        let spec = &(*system).spec;
        let params = DerivedParams::derive(spec, eps_param);
        let verdict = full_verdict(spec, &params, None);
        *out_verdict = verdict.conclusion.into();
        QctrlStatus::Ok
    })
}

/// Compute the dimension of the dynamical Lie algebra generated by `iH0`
/// and `iH1`, storing it in `*out_dimension`.
///
/// # Safety
/// `system` and `out_dimension` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qctrl_closure_dimension(
    system: *const QctrlSystem,
    eps_rank: f64,
    out_dimension: *mut usize,
) -> QctrlStatus {
    guard(|| {
        if system.is_null() || out_dimension.is_null() {
            return QctrlStatus::NullArg;
        }
        if !valid_eps(eps_rank) {
            return QctrlStatus::InvalidTolerance;
        }
        let spec = &(*system).spec;
        match closure(&[build_h0(spec), build_h1(spec)], eps_rank, None) {
            Ok(result) => {
                *out_dimension = result.dimension;
                QctrlStatus::Ok
            }
            Err(_) => QctrlStatus::InvalidSpec,
        }
    })
}

/// Produce the full JSON report (rule verdict, and the closure oracle when
/// `with_oracle` is nonzero). `*out_json` receives a NUL-terminated string
/// owned by the library; free it with `qctrl_string_free`.
///
/// # Safety
/// `system` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qctrl_report_json(
    system: *const QctrlSystem,
    eps_param: f64,
    eps_rank: f64,
    with_oracle: i32,
    out_json: *mut *mut c_char,
) -> QctrlStatus {
    guard(|| {
        if system.is_null() || out_json.is_null() {
            return QctrlStatus::NullArg;
        }
        if !valid_eps(eps_param) || !valid_eps(eps_rank) {
            return QctrlStatus::InvalidTolerance;
        }
        *out_json = ptr::null_mut();
        let spec = &(*system).spec;
        let mut file = SpecFile::from_system_spec(None, spec);
        file.tolerances = Some(qctrl::io::Tolerances {
            eps_param: Some(eps_param),
            eps_rank: Some(eps_rank),
        });
        let report = match run_check(&file, with_oracle != 0) {
            Ok(r) => r,
            Err(_) => return QctrlStatus::InvalidSpec,
        };
        let json = match serde_json::to_string(&report) {
            Ok(j) => j,
            Err(_) => return QctrlStatus::Internal,
        };
        match CString::new(json) {
            Ok(c) => {
                *out_json = c.into_raw();
                QctrlStatus::Ok
            }
            Err(_) => QctrlStatus::Internal,
        }
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned in an out-string
/// parameter that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qctrl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn new_system(levels: &[f64], dipoles: &[f64]) -> *mut QctrlSystem {
        let mut handle: *mut QctrlSystem = ptr::null_mut();
        let status = unsafe {
            qctrl_system_new(levels.as_ptr(), levels.len(), dipoles.as_ptr(), &mut handle)
        };
        assert_eq!(status, QctrlStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn verdict_and_dimension_roundtrip() {
        let h = new_system(&[0.0, 1.0, 3.0, 4.0], &[1.0, 1.0, 1.0]);
        let mut verdict = QctrlVerdict::Undetermined;
        assert_eq!(
            unsafe { qctrl_verdict(h, 1e-9, &mut verdict) },
            QctrlStatus::Ok
        );
        assert_eq!(verdict, QctrlVerdict::NotControllable);

        let mut dim = 0usize;
        assert_eq!(
            unsafe { qctrl_closure_dimension(h, 1e-8, &mut dim) },
            QctrlStatus::Ok
        );
        assert_eq!(dim, 11);
        unsafe { qctrl_system_free(h) };
    }

    #[test]
    fn report_json_parses() {
        let h = new_system(&[0.0, 0.9, 1.7, 2.4], &[1.0, 1.0, 1.0]);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { qctrl_report_json(h, 1e-9, 1e-8, 1, &mut s) },
            QctrlStatus::Ok
        );
        assert!(!s.is_null());
        let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        unsafe { qctrl_string_free(s) };
        unsafe { qctrl_system_free(h) };
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["oracle"]["dimension"], 16);
        assert_eq!(doc["agreement"], true);
    }

    #[test]
    fn error_codes() {
        let mut verdict = QctrlVerdict::Undetermined;
        assert_eq!(
            unsafe { qctrl_verdict(ptr::null(), 1e-9, &mut verdict) },
            QctrlStatus::NullArg
        );

        // unsorted levels are an invalid spec
        let mut handle: *mut QctrlSystem = ptr::null_mut();
        let levels = [1.0, 0.0];
        let dipoles = [1.0];
        assert_eq!(
            unsafe { qctrl_system_new(levels.as_ptr(), 2, dipoles.as_ptr(), &mut handle) },
            QctrlStatus::InvalidSpec
        );

        let h = new_system(&[0.0, 1.0], &[1.0]);
        assert_eq!(
            unsafe { qctrl_verdict(h, -1.0, &mut verdict) },
            QctrlStatus::InvalidTolerance
        );
        let mut dim = 0usize;
        assert_eq!(
            unsafe { qctrl_closure_dimension(h, f64::NAN, &mut dim) },
            QctrlStatus::InvalidTolerance
        );
        unsafe { qctrl_system_free(h) };

        // freeing NULL is a no-op
        unsafe { qctrl_system_free(ptr::null_mut()) };
        unsafe { qctrl_string_free(ptr::null_mut()) };
    }
}
