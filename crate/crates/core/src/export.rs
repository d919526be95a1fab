//! Deterministic file formats.
//!
//! CSV rows carry (index, valuation, digit_string, monna_real, re, im); the
//! Monna coordinate is a digit-reversal plotting aid only. JSON envelopes have
//! fixed field order and floats printed with 17 significant digits, so one
//! configuration always produces byte-identical output.

use crate::grid::{GridFunction, GridSpec};
use crate::jackiw_rebbi::{BoundState, EdgeState2D};
use std::fmt::Write as _;

/// Fixed-width float formatting: 17 significant digits, sign and exponent
/// normalized by the standard formatter.
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "exported values must be finite");
    format!("{:.16e}", x)
}

/// CSV with one row per grid point.
pub fn grid_function_csv(f: &GridFunction) -> String {
    let spec = f.spec();
    let mut out = String::new();
    out.push_str("index,valuation,digit_string,monna_real,re,im\n");
    for (a, v) in f.values().iter().enumerate() {
        let val = match spec.ord_of_index(a) {
            Some(o) => o.to_string(),
            None => "inf".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            a,
            val,
            spec.digit_string(a),
            fmt_f64(spec.monna_of_index(a)),
            fmt_f64(v.re),
            fmt_f64(v.im)
        );
    }
    out
}

fn grid_function_json_into(out: &mut String, f: &GridFunction) {
    let spec = f.spec();
    let _ = write!(
        out,
        "{{\"p\":{},\"N\":{},\"M\":{},\"values\":[",
        spec.p(),
        spec.support_exp(),
        spec.constancy_exp()
    );
    for (i, v) in f.values().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", fmt_f64(v.re), fmt_f64(v.im));
    }
    out.push_str("]}");
}

/// JSON envelope {p, N, M, values: [[re, im], ...]}.
pub fn grid_function_json(f: &GridFunction) -> String {
    let mut out = String::new();
    grid_function_json_into(&mut out, f);
    out.push('\n');
    out
}

fn header_json_into(out: &mut String, spec: &GridSpec) {
    let _ = write!(
        out,
        "\"p\":{},\"N\":{},\"M\":{}",
        spec.p(),
        spec.support_exp(),
        spec.constancy_exp()
    );
}

/// JSON record for a 1D bound state.
pub fn bound_state_json(state: &BoundState) -> String {
    let mut out = String::new();
    out.push('{');
    header_json_into(&mut out, state.field.spec());
    let _ = write!(
        out,
        ",\"E\":{},\"r_minus\":{},\"r_plus\":{},\"j_minus\":{},\"j_plus\":{},\
         \"lambda_minus\":{},\"lambda_plus\":{},\"norm\":{},\
         \"residual_report\":{{\"per_region_algebra\":{},\"global_hamiltonian\":{}}},\"field\":{{\"up\":",
        fmt_f64(state.e),
        state.r_minus,
        state.r_plus,
        state.j_minus,
        state.j_plus,
        fmt_f64(state.lambda_minus),
        fmt_f64(state.lambda_plus),
        fmt_f64(state.norm),
        fmt_f64(state.residual_report.per_region_algebra),
        fmt_f64(state.residual_report.global_hamiltonian),
    );
    grid_function_json_into(&mut out, state.field.up());
    out.push_str(",\"down\":");
    grid_function_json_into(&mut out, state.field.down());
    out.push_str("}}\n");
    out
}

/// JSON record for a 2D edge state; the field carries the four tensor factors.
pub fn edge_state_json(state: &EdgeState2D) -> String {
    let mut out = String::new();
    out.push('{');
    header_json_into(&mut out, state.x_state.field.spec());
    let yspec = state.y_factor.spec();
    let _ = write!(
        out,
        ",\"N_y\":{},\"M_y\":{},\"E\":{},\"l\":{},\"s\":{},\"r_minus\":{},\"r_plus\":{},\
         \"j_minus\":{},\"j_plus\":{},\"lambda_minus\":{},\"lambda_plus\":{},\"norm\":{},\
         \"residual_report\":{{\"per_region_algebra\":{},\"global_hamiltonian\":{}}},\"field\":{{\"x_up\":",
        yspec.support_exp(),
        yspec.constancy_exp(),
        fmt_f64(state.e),
        state.l,
        state.s,
        state.x_state.r_minus,
        state.x_state.r_plus,
        state.x_state.j_minus,
        state.x_state.j_plus,
        fmt_f64(state.x_state.lambda_minus),
        fmt_f64(state.x_state.lambda_plus),
        fmt_f64(state.norm),
        fmt_f64(state.residual_report.per_region_algebra),
        fmt_f64(state.residual_report.global_hamiltonian),
    );
    grid_function_json_into(&mut out, state.x_state.field.up());
    out.push_str(",\"x_down\":");
    grid_function_json_into(&mut out, state.x_state.field.down());
    out.push_str(",\"y_up\":");
    grid_function_json_into(&mut out, &state.y_factor);
    out.push_str(",\"y_down\":");
    grid_function_json_into(&mut out, &state.y_factor);
    out.push_str("}}\n");
    out
}

/// CSV of a matching-condition scan.
pub fn matching_scan_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("E,residual\n");
    for (e, r) in rows {
        let _ = writeln!(out, "{},{}", fmt_f64(*e), fmt_f64(*r));
    }
    out
}

/// CSV of transform timings.
pub fn bench_csv(rows: &[(usize, f64, f64)]) -> String {
    let mut out = String::from("size,naive_ms,fft_ms\n");
    for (size, naive, fft) in rows {
        let _ = writeln!(out, "{},{},{}", size, fmt_f64(*naive), fmt_f64(*fft));
    }
    out
}

/// CSV of the 2D edge dispersion table.
pub fn dispersion_csv(rows: &[(i32, u8, i8, f64)]) -> String {
    let mut out = String::from("l,s,s_class,E\n");
    for (l, s, class, e) in rows {
        let _ = writeln!(out, "{},{},{},{}", l, s, class, fmt_f64(*e));
    }
    out
}
