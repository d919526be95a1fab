//! C ABI over the qpdirac library.
//!
//! Conventions: every fallible call returns a [`QpdStatus`]; results come back
//! through out-pointers. Grids are opaque handles created by [`qpd_grid_new`]
//! and released by [`qpd_grid_free`]. Strings returned by the library are
//! NUL-terminated, owned by the library, and must be released with
//! [`qpd_string_free`]. All functions are panic-safe at the boundary.

use qpdirac::error::Error;
use qpdirac::jackiw_rebbi::{admissible_scale, build_zero_mode, edge_energy, PhysicalParams};
use qpdirac::operators::{gamma_factor, max_eigen_residual, OpMode};
use qpdirac::{GridSpec, PrimeContext};
use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpdStatus {
    /// Success.
    Ok = 0,
    /// A pointer argument was NULL.
    NullPointer = 1,
    /// Arguments failed validation (bad prime, grid bounds, classes, ...).
    InvalidArgument = 2,
    /// Physically inadmissible request (mass off the scale ladder, imaginary
    /// energy, matching pole).
    Inadmissible = 3,
    /// Internal failure.
    Internal = 4,
}

/// Opaque grid handle: a fixed odd prime with support and constancy exponents.
pub struct QpdGrid {
    spec: GridSpec,
}

fn status_of(e: &Error) -> QpdStatus {
    match e {
        Error::InadmissibleMass { .. } | Error::ImaginaryEnergy(_) | Error::MatchingPole(_) => {
            QpdStatus::Inadmissible
        }
        Error::Io(_) => QpdStatus::Internal,
        _ => QpdStatus::InvalidArgument,
    }
}

fn guarded<F: FnOnce() -> QpdStatus>(f: F) -> QpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => QpdStatus::Internal,
    }
}

/// Create a grid handle for the quotient p^{-support_exp} Z_p / p^{constancy_exp} Z_p.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qpd_grid_new(
    p: u32,
    support_exp: i32,
    constancy_exp: i32,
    out: *mut *mut QpdGrid,
) -> QpdStatus {
    if out.is_null() {
        return QpdStatus::NullPointer;
    }
    guarded(|| match GridSpec::new(p, support_exp, constancy_exp) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(QpdGrid { spec }));
            QpdStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a grid handle. NULL is ignored.
///
/// # Safety
/// `grid` must be a pointer returned by [`qpd_grid_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpd_grid_free(grid: *mut QpdGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of grid points p^{support_exp + constancy_exp}; 0 for NULL.
///
/// # Safety
/// `grid` must be a live handle from [`qpd_grid_new`] or NULL.
#[no_mangle]
pub unsafe extern "C" fn qpd_grid_len(grid: *const QpdGrid) -> usize {
    if grid.is_null() {
        0
    } else {
        (*grid).spec.len()
    }
}

/// Twisted gamma factor Γ_p(s, π), written to (out_re, out_im).
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qpd_gamma(
    p: u32,
    s: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QpdStatus {
    if out_re.is_null() || out_im.is_null() {
        return QpdStatus::NullPointer;
    }
    guarded(|| match PrimeContext::new(p) {
        Ok(ctx) => {
            let g = gamma_factor(s, &ctx);
            *out_re = g.re;
            *out_im = g.im;
            QpdStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Largest eigenrelation residual over every representable character wave on
/// the grid. `kernel_mode` = 0 selects the spectral form, nonzero the kernel
/// oracle. The swept index count lands in `out_count` when non-NULL.
///
/// # Safety
/// `grid` must be a live handle; `out_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qpd_eigen_max_residual(
    grid: *const QpdGrid,
    alpha: f64,
    kernel_mode: i32,
    out_residual: *mut f64,
    out_count: *mut usize,
) -> QpdStatus {
    if grid.is_null() || out_residual.is_null() {
        return QpdStatus::NullPointer;
    }
    guarded(|| {
        let mode = if kernel_mode == 0 { OpMode::Spectral } else { OpMode::Kernel };
        let (max, count) = max_eigen_residual(&(*grid).spec, alpha, mode);
        *out_residual = max;
        if !out_count.is_null() {
            *out_count = count;
        }
        QpdStatus::Ok
    })
}

/// Solve the 1D interface zero mode for a two-value mass profile and return
/// the bound-state record as a JSON string (see the library documentation for
/// the schema). `snap` nonzero rounds inadmissible masses to the nearest
/// scale rung.
///
/// # Safety
/// `grid` must be a live handle; `out_json` must point to writable storage
/// for one pointer. The returned string must be freed via [`qpd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qpd_solve_1d_json(
    grid: *const QpdGrid,
    m1: f64,
    m2: f64,
    v: f64,
    hbar: f64,
    snap: i32,
    out_json: *mut *mut c_char,
) -> QpdStatus {
    if grid.is_null() || out_json.is_null() {
        return QpdStatus::NullPointer;
    }
    guarded(|| {
        let spec = &(*grid).spec;
        let result = (|| -> Result<String, Error> {
            let params = PhysicalParams::new(v, hbar)?;
            let fit_minus = admissible_scale(spec.p(), m1, &params, snap != 0)?;
            let fit_plus = admissible_scale(spec.p(), m2, &params, snap != 0)?;
            let ctx = spec.context();
            let state = build_zero_mode(
                spec,
                fit_minus.r,
                fit_plus.r,
                ctx.non_residues()[0],
                ctx.residues()[0],
                &params,
            )?;
            Ok(qpdirac::export::bound_state_json(&state))
        })();
        match result {
            Ok(json) => match CString::new(json) {
                Ok(cstr) => {
                    *out_json = cstr.into_raw();
                    QpdStatus::Ok
                }
                Err(_) => QpdStatus::Internal,
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Edge dispersion of the constructed 2D states: E = -ħv π^{-1}(s) p^{1-l}.
///
/// # Safety
/// `out_energy` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qpd_edge_energy_2d(
    p: u32,
    l: i32,
    s: u8,
    v: f64,
    hbar: f64,
    out_energy: *mut f64,
) -> QpdStatus {
    if out_energy.is_null() {
        return QpdStatus::NullPointer;
    }
    guarded(|| {
        let params = match PhysicalParams::new(v, hbar) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        match edge_energy(p, l, s, &params) {
            Ok(e) => {
                *out_energy = e;
                QpdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Free a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by a `*_json` function of this
/// library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
