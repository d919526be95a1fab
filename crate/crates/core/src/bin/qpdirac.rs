//! Command-line driver: eigenrelation sweeps, gamma factors, 1D/2D interface
//! solvers, transform benchmarks and grid-function export.
//!
//! Exit codes: 0 success, 2 usage/validation, 3 inadmissible physics,
//! 4 internal tolerance failure.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qpdirac::error::Error;
use qpdirac::export;
use qpdirac::fourier::{forward, forward_fft};
use qpdirac::grid::{indicator, representable_wavelets, wavelet, Ball, GridFunction, GridSpec, WaveletIndex};
use qpdirac::jackiw_rebbi::{
    admissible_scale, build_zero_mode, edge_energy, matching_residual, solve_edge_2d, PauliSet,
    PhysicalParams,
};
use qpdirac::operators::{eigen_residual, gamma_factor, OpMode};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EIGEN_GATE: f64 = 1e-9;
const BENCH_GATE: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "qpdirac", version, about = "p-adic spectral methods and Jackiw-Rebbi solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the eigenrelation over every representable character wave
    VerifyEigen {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n: i32,
        #[arg(long = "M")]
        m: i32,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Print one line per index instead of the summary only
        #[arg(long)]
        table: bool,
    },
    /// Print the twisted gamma factor at s
    Gamma {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
    },
    /// Build the 1D interface zero mode for a two-value mass profile
    #[command(name = "solve-1d")]
    Solve1d {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n: i32,
        #[arg(long = "M")]
        m: i32,
        /// Mass on the minus cone (or give --r-minus)
        #[arg(long)]
        m1: Option<f64>,
        /// Mass on the plus cone (or give --r-plus)
        #[arg(long)]
        m2: Option<f64>,
        /// Scale exponent of the minus branch: overrides --m1
        #[arg(long, allow_negative_numbers = true)]
        r_minus: Option<i32>,
        /// Scale exponent of the plus branch: overrides --m2
        #[arg(long, allow_negative_numbers = true)]
        r_plus: Option<i32>,
        /// Character digit of the minus branch (default: first non-residue)
        #[arg(long)]
        j_minus: Option<u8>,
        /// Character digit of the plus branch (default: first residue)
        #[arg(long)]
        j_plus: Option<u8>,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Snap inadmissible masses to the nearest scale rung
        #[arg(long)]
        snap: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write a matching-residual scan CSV here
        #[arg(long)]
        scan: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        scan_points: usize,
    },
    /// Build a 2D edge state and the dispersion table
    #[command(name = "solve-2d")]
    Solve2d {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n: i32,
        #[arg(long = "M")]
        m: i32,
        /// Mass on the minus cone (or give --r-minus)
        #[arg(long)]
        m1: Option<f64>,
        /// Mass on the plus cone (or give --r-plus)
        #[arg(long)]
        m2: Option<f64>,
        /// Scale exponent of the minus branch: overrides --m1
        #[arg(long, allow_negative_numbers = true)]
        r_minus: Option<i32>,
        /// Scale exponent of the plus branch: overrides --m2
        #[arg(long, allow_negative_numbers = true)]
        r_plus: Option<i32>,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long)]
        snap: bool,
        /// Scale index of the transverse wave
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        l: i32,
        /// Character digit of the transverse wave (default: first residue)
        #[arg(long)]
        s: Option<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the dispersion table CSV
        #[arg(long)]
        dispersion_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Time the naive against the radix-p transform over sizes p^k
    BenchFft {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        k_min: i32,
        #[arg(long, default_value_t = 6)]
        k_max: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a character wave or ball indicator
    Export {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n: i32,
        #[arg(long = "M")]
        m: i32,
        /// "theta" (needs --r, --shift-num, --shift-den, --j) or "indicator"
        /// (needs --center-num, --center-den, --radius)
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        r: i32,
        #[arg(long, default_value_t = 0)]
        shift_num: u64,
        #[arg(long, default_value_t = 0)]
        shift_den: u32,
        #[arg(long, default_value_t = 1)]
        j: u8,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        center_num: i64,
        #[arg(long, default_value_t = 0)]
        center_den: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        radius: i32,
        /// Apply the twisted operator at this α before exporting
        #[arg(long)]
        apply_alpha: Option<f64>,
        /// Operator form for --apply-alpha: "spectral" or "kernel"
        #[arg(long, default_value = "spectral")]
        apply_mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QPDIRAC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    if !PauliSet::algebra_holds() {
        eprintln!("internal error: Pauli algebra check failed");
        return ExitCode::from(4);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InadmissibleMass { .. } | Error::ImaginaryEnergy(_) | Error::MatchingPole(_) => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn emit(path: &Option<PathBuf>, contents: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::VerifyEigen { p, n, m, alpha, table } => {
            let spec = GridSpec::new(p, n, m)?;
            let indices = representable_wavelets(&spec);
            let mut max_spectral = 0.0f64;
            let mut max_kernel = 0.0f64;
            for idx in &indices {
                let rs = eigen_residual(&spec, idx, alpha, OpMode::Spectral)?;
                let rk = eigen_residual(&spec, idx, alpha, OpMode::Kernel)?;
                if table {
                    println!(
                        "r={} n={}/p^{} j={} spectral={:.3e} kernel={:.3e}",
                        idx.scale, idx.shift_num, idx.shift_den_exp, idx.digit, rs, rk
                    );
                }
                max_spectral = max_spectral.max(rs);
                max_kernel = max_kernel.max(rk);
            }
            println!(
                "swept {} indices on p={} N={} M={} alpha={}: max spectral residual {:.3e}, max kernel residual {:.3e}",
                indices.len(), p, n, m, alpha, max_spectral, max_kernel
            );
            if max_spectral < EIGEN_GATE && max_kernel < EIGEN_GATE {
                println!("PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL (gate {EIGEN_GATE:.0e})");
                Ok(ExitCode::from(4))
            }
        }

        Command::Gamma { p, s } => {
            let ctx = qpdirac::PrimeContext::new(p)?;
            let g = gamma_factor(s, &ctx);
            println!(
                "Gamma_{p}({s}) = {} + {} i (modulus {}, expected p^(s-1/2) = {})",
                export::fmt_f64(g.re),
                export::fmt_f64(g.im),
                export::fmt_f64(g.norm()),
                export::fmt_f64((p as f64).powf(s - 0.5)),
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve1d {
            p, n, m, m1, m2, r_minus, r_plus, j_minus, j_plus, v, hbar, snap, out, format, scan,
            scan_points,
        } => {
            let params = PhysicalParams::new(v, hbar)?;
            let spec = GridSpec::new(p, n, m)?;
            let fit_minus = resolve_scale(p, m1, r_minus, &params, snap, "--m1 or --r-minus")?;
            let fit_plus = resolve_scale(p, m2, r_plus, &params, snap, "--m2 or --r-plus")?;
            if fit_minus.snapped {
                println!("m1 snapped: effective mass {}", export::fmt_f64(fit_minus.effective_mass));
            }
            if fit_plus.snapped {
                println!("m2 snapped: effective mass {}", export::fmt_f64(fit_plus.effective_mass));
            }
            let (em1, em2) = (fit_minus.effective_mass, fit_plus.effective_mass);

            if let Some(scan_path) = &scan {
                let bound = em1.min(em2) * v * v;
                let rows: Vec<(f64, f64)> = (1..scan_points)
                    .map(|i| {
                        let e = -bound + 2.0 * bound * i as f64 / scan_points as f64;
                        (e, matching_residual(e, em1, em2, &params).unwrap_or(f64::NAN))
                    })
                    .filter(|(_, r)| r.is_finite())
                    .collect();
                emit(&Some(scan_path.clone()), &export::matching_scan_csv(&rows))?;
            }
            let at_zero = matching_residual(0.0, em1, em2, &params)?;

            let ctx = spec.context();
            let j_plus = j_plus.unwrap_or(ctx.residues()[0]);
            let j_minus = j_minus.unwrap_or(ctx.non_residues()[0]);
            let state = build_zero_mode(&spec, fit_minus.r, fit_plus.r, j_minus, j_plus, &params)?;
            println!(
                "zero mode: E=0 r_minus={} r_plus={} j_minus={} j_plus={} norm={} matching(0)={}",
                state.r_minus,
                state.r_plus,
                state.j_minus,
                state.j_plus,
                export::fmt_f64(state.norm),
                export::fmt_f64(at_zero),
            );
            println!(
                "residual report: per_region_algebra={} global_hamiltonian={}",
                export::fmt_f64(state.residual_report.per_region_algebra),
                export::fmt_f64(state.residual_report.global_hamiltonian),
            );
            match format {
                Format::Json => emit(&out, &export::bound_state_json(&state))?,
                Format::Csv => {
                    let up = export::grid_function_csv(state.field.up());
                    let down = export::grid_function_csv(state.field.down());
                    match &out {
                        Some(path) => {
                            std::fs::write(with_suffix(path, "up"), up)?;
                            std::fs::write(with_suffix(path, "down"), down)?;
                        }
                        None => print!("{up}{down}"),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve2d {
            p, n, m, m1, m2, r_minus, r_plus, v, hbar, snap, l, s, out, dispersion_out, format,
        } => {
            let params = PhysicalParams::new(v, hbar)?;
            let spec_x = GridSpec::new(p, n, m)?;
            let spec_y = GridSpec::new(p, n, m)?;
            let fit_minus = resolve_scale(p, m1, r_minus, &params, snap, "--m1 or --r-minus")?;
            let fit_plus = resolve_scale(p, m2, r_plus, &params, snap, "--m2 or --r-plus")?;
            let ctx = spec_x.context();
            let j_plus = ctx.residues()[0];
            let j_minus = ctx.non_residues()[0];
            let s_digit = s.unwrap_or(j_plus);

            let state = solve_edge_2d(
                &spec_x, &spec_y, fit_minus.r, fit_plus.r, j_minus, j_plus, l, (0, 0), s_digit,
                &params,
            )?;
            println!(
                "edge state: l={} s={} E={} norm={} y_residual={} global={}",
                state.l,
                state.s,
                export::fmt_f64(state.e),
                export::fmt_f64(state.norm),
                export::fmt_f64(state.residual_report.per_region_algebra),
                export::fmt_f64(state.residual_report.global_hamiltonian),
            );

            // every scale with a representable centered transverse wave
            let mut rows = Vec::new();
            for ell in (1 - m)..=n {
                for (digit, class) in
                    [(ctx.residues()[0], 1i8), (ctx.non_residues()[0], -1i8)]
                {
                    rows.push((ell, digit, class, edge_energy(p, ell, digit, &params)?));
                }
            }
            if let Some(path) = &dispersion_out {
                emit(&Some(path.clone()), &export::dispersion_csv(&rows))?;
            } else {
                print!("{}", export::dispersion_csv(&rows));
            }

            match format {
                Format::Json => emit(&out, &export::edge_state_json(&state))?,
                Format::Csv => {
                    let xu = export::grid_function_csv(state.x_state.field.up());
                    let xd = export::grid_function_csv(state.x_state.field.down());
                    let y = export::grid_function_csv(&state.y_factor);
                    match &out {
                        Some(path) => {
                            std::fs::write(with_suffix(path, "x_up"), xu)?;
                            std::fs::write(with_suffix(path, "x_down"), xd)?;
                            std::fs::write(with_suffix(path, "y"), y)?;
                        }
                        None => print!("{xu}{xd}{y}"),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::BenchFft { p, k_min, k_max, out } => {
            if k_min < 1 || k_max < k_min {
                return Err(Error::InvalidGrid { n: k_min, m: k_max });
            }
            let mut rows = Vec::new();
            let mut ok = true;
            for k in k_min..=k_max {
                let spec = GridSpec::new(p, k - 1, 1)?;
                let phi = GridFunction::from_fn(&spec, |a| {
                    let t = a as f64 + 0.5;
                    Complex64::new((0.83 * t).sin(), (1.17 * t).cos())
                });
                let t0 = Instant::now();
                let naive = forward(&phi);
                let naive_ms = t0.elapsed().as_secs_f64() * 1e3;
                let t1 = Instant::now();
                let fast = forward_fft(&phi);
                let fft_ms = t1.elapsed().as_secs_f64() * 1e3;
                let diff = naive
                    .values()
                    .iter()
                    .zip(fast.values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                if diff >= BENCH_GATE {
                    ok = false;
                }
                println!(
                    "P = {:>8}: naive {:>10.3} ms, fft {:>8.3} ms, max diff {:.2e}",
                    spec.len(),
                    naive_ms,
                    fft_ms,
                    diff
                );
                rows.push((spec.len(), naive_ms, fft_ms));
            }
            if let Some(path) = &out {
                emit(&Some(path.clone()), &export::bench_csv(&rows))?;
            }
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: transforms disagree beyond {BENCH_GATE:.0e}");
                Ok(ExitCode::from(4))
            }
        }

        Command::Export {
            p, n, m, kind, r, shift_num, shift_den, j, center_num, center_den, radius,
            apply_alpha, apply_mode, out, format,
        } => {
            let spec = GridSpec::new(p, n, m)?;
            let mut f = match kind.as_str() {
                "theta" => wavelet(&spec, &WaveletIndex::new(r, shift_num, shift_den, j))?,
                "indicator" => indicator(&spec, &Ball::new(center_num, center_den, radius))?,
                other => {
                    return Err(Error::MassProfile(format!(
                        "unknown export kind '{other}' (use theta or indicator)"
                    )))
                }
            };
            if let Some(alpha) = apply_alpha {
                let mode = match apply_mode.as_str() {
                    "spectral" => OpMode::Spectral,
                    "kernel" => OpMode::Kernel,
                    other => {
                        return Err(Error::MassProfile(format!(
                            "unknown operator form '{other}' (use spectral or kernel)"
                        )))
                    }
                };
                f = qpdirac::operators::apply(&f, alpha, mode);
            }
            let contents = match format {
                Format::Json => export::grid_function_json(&f),
                Format::Csv => export::grid_function_csv(&f),
            };
            emit(&out, &contents)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Scale exponent from an explicit --r flag or an admissible mass.
fn resolve_scale(
    p: u32,
    mass: Option<f64>,
    r: Option<i32>,
    params: &PhysicalParams,
    snap: bool,
    what: &str,
) -> Result<qpdirac::jackiw_rebbi::ScaleFit, Error> {
    use qpdirac::jackiw_rebbi::ScaleFit;
    match (r, mass) {
        (Some(r), _) => Ok(ScaleFit {
            r,
            effective_mass: params.hbar * qpdirac::padic::pow_f64(p, 1 - r) / params.v,
            snapped: false,
        }),
        (None, Some(m)) => admissible_scale(p, m, params, snap),
        (None, None) => Err(Error::MassProfile(format!("missing mass selector: give {what}"))),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!(".{suffix}"));
    if let Some(ext) = path.extension() {
        name.push(".");
        name.push(ext);
    }
    path.with_file_name(name)
}
