//! End-to-end checks of the command-line driver: exit codes, output formats,
//! and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qpdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpdirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qpdirac-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_eigen_smoke_run_exits_zero() {
    let out = qpdirac(&["verify-eigen", "--p", "3", "--N", "1", "--M", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"), "{text}");
}

#[test]
fn verify_eigen_table_lists_every_index() {
    let out = qpdirac(&["verify-eigen", "--p", "5", "--N", "2", "--M", "2", "--table"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // complete family: p^{N+M} - 1 indices
    assert_eq!(text.lines().filter(|l| l.starts_with("r=")).count(), 624);
    assert!(text.contains("swept 624 indices"));
}

#[test]
fn invalid_grid_is_a_usage_error() {
    let out = qpdirac(&["verify-eigen", "--p", "5", "--N", "0", "--M", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = qpdirac(&["verify-eigen", "--p", "5", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_prints_value_and_modulus() {
    let out = qpdirac(&["gamma", "--p", "5", "--s", "-1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // √5/25 = 8.944...e-2
    assert!(text.contains("8.9442719099991"), "{text}");
}

#[test]
fn solve_1d_inadmissible_mass_exits_three() {
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "2", "--M", "2", "--m1", "2", "--m2", "25",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_1d_snap_reports_effective_mass() {
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "2", "--M", "2", "--m1", "2", "--m2", "25", "--snap",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("m1 snapped: effective mass 1.0000000000000000e0"), "{text}");
}

#[test]
fn solve_1d_zero_mode_summary_and_json() {
    let path = tmp("zm.json");
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "2", "--M", "2", "--m1", "5", "--m2", "25", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("r_minus=0 r_plus=-1"), "{text}");
    assert!(text.contains("norm=1.0000000000000000e0"), "{text}");
    let json = std::fs::read_to_string(&path).unwrap();
    assert!(json.starts_with("{\"p\":5,\"N\":2,\"M\":2,\"E\":0.0000000000000000e0"));
    assert!(json.contains("\"r_minus\":0,\"r_plus\":-1,\"j_minus\":2,\"j_plus\":1"));
    assert!(json.contains("\"residual_report\":{\"per_region_algebra\":"));
}

#[test]
fn solve_1d_scan_csv_has_requested_rows() {
    let scan = tmp("scan.csv");
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "1", "--M", "1", "--m1", "5", "--m2", "5", "--scan",
        scan.to_str().unwrap(), "--scan-points", "1000",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&scan).unwrap();
    assert!(text.starts_with("E,residual\n"));
    assert_eq!(text.lines().count(), 1000); // header + 999 interior points
}

#[test]
fn solve_1d_csv_format_writes_components() {
    let path = tmp("zm.csv");
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "1", "--M", "1", "--m1", "5", "--m2", "5", "--format",
        "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let up = std::fs::read_to_string(tmp("zm.up.csv")).unwrap();
    assert!(up.starts_with("index,valuation,digit_string,monna_real,re,im\n"));
    assert!(std::fs::read_to_string(tmp("zm.down.csv")).is_ok());
}

#[test]
fn solve_2d_dispersion_table() {
    let disp = tmp("disp.csv");
    let out = qpdirac(&[
        "solve-2d", "--p", "5", "--N", "2", "--M", "2", "--m1", "5", "--m2", "25", "--l", "1",
        "--dispersion-out", disp.to_str().unwrap(), "--out", tmp("edge.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&disp).unwrap();
    assert!(table.starts_with("l,s,s_class,E\n"));
    // l ∈ {0,1,2} ⊂ the emitted range; both branches at l = 1 have |E| = 1
    assert!(table.contains("\n1,1,1,-1.0000000000000000e0"));
    assert!(table.contains("\n1,2,-1,1.0000000000000000e0"));
    // magnitudes 5 and 1/5 at l = 0 and l = 2
    assert!(table.contains("\n0,1,1,-5.0000000000000000e0"));
    assert!(table.contains("\n2,2,-1,2.0000000000000001e-1"));
}

#[test]
fn solve_2d_json_records_energy() {
    let path = tmp("edge2.json");
    let out = qpdirac(&[
        "solve-2d", "--p", "3", "--N", "2", "--M", "2", "--m1", "3", "--m2", "3", "--l", "1",
        "--s", "1", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json = std::fs::read_to_string(&path).unwrap();
    // s = 1 is a residue: E = -ħv p^{1-l} = -1
    assert!(json.contains("\"E\":-1.0000000000000000e0"), "{json}");
    assert!(json.contains("\"field\":{\"x_up\":"));
}

#[test]
fn export_theta_deterministic() {
    let a = qpdirac(&[
        "export", "--p", "5", "--N", "1", "--M", "1", "--kind", "theta", "--r", "0", "--j", "1",
    ]);
    let b = qpdirac(&[
        "export", "--p", "5", "--N", "1", "--M", "1", "--kind", "theta", "--r", "0", "--j", "1",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.starts_with("index,valuation,digit_string,monna_real,re,im\n"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn export_rejects_unknown_kind() {
    let out = qpdirac(&["export", "--p", "5", "--N", "1", "--M", "1", "--kind", "spline"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_json_envelope_shape() {
    let out = qpdirac(&[
        "export", "--p", "3", "--N", "1", "--M", "1", "--kind", "indicator", "--radius", "0",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("{\"p\":3,\"N\":1,\"M\":1,\"values\":[["));
}

#[test]
fn solve_1d_accepts_scale_exponents_directly() {
    let out = qpdirac(&[
        "solve-1d", "--p", "5", "--N", "2", "--M", "2", "--r-minus", "0", "--r-plus", "-1",
        "--j-minus", "3", "--j-plus", "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("j_minus=3 j_plus=4"), "{text}");
    assert!(text.contains("norm=1.0000000000000000e0"), "{text}");
}

#[test]
fn solve_1d_requires_some_mass_selector() {
    let out = qpdirac(&["solve-1d", "--p", "5", "--N", "1", "--M", "1", "--m2", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_can_apply_the_operator() {
    // D̃ scales Θ_{0,0,1} by p: exporting the image shows value p at x = 0
    let out = qpdirac(&[
        "export", "--p", "5", "--N", "1", "--M", "1", "--kind", "theta", "--r", "0", "--j", "1",
        "--apply-alpha", "1", "--apply-mode", "kernel",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let first_row = text.lines().nth(1).unwrap();
    assert!(first_row.starts_with("0,inf,00,"), "{first_row}");
    assert!(first_row.contains(",5.0000000000000"), "{first_row}");
}

#[test]
fn bench_fft_small_run() {
    let out = qpdirac(&["bench-fft", "--p", "3", "--k-min", "1", "--k-max", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.contains("max diff")).count(), 4);
}
