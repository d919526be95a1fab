//! The twisted Taibleson-Vladimirov operator in spectral and kernel form, and
//! the twisted gamma factor.
//!
//! Spectral form: D̃^{α,π} φ = F^{-1}( m(ξ) Fφ ) with multiplier
//! m(ξ) = π^{-1}(-ξ) |ξ|_p^α and m(0) = 0. The character is evaluated at -ξ:
//! with the χ_p(+ξx) forward kernel the transform of Θ_{r,n,j} is supported on
//! the coset -p^{r-1} j + p^r Z_p (leading digit p - j), so this is the unique
//! multiplier for which the eigenrelation
//!
//!   D̃^{α,π} Θ_{r,n,j} = π^{-1}(j) p^{(1-r)α} Θ_{r,n,j}
//!
//! holds for every odd p. For p ≡ 1 (mod 4) it coincides with π^{-1}(ξ)|ξ|^α.
//!
//! Kernel form (the ground-truth oracle, no Fourier step):
//!
//!   D̃^{α,π} φ(x) = Γ_p(-α,π)^{-1} ∫ π(-y) {φ(x-y) - φ(x)} |y|_p^{-α-1} dy
//!
//! evaluated as an exact finite sum over grid cells: shells |y| ≤ p^{-M}
//! vanish by local constancy, shells |y| > p^N vanish because the character
//! sums to zero on every full shell, so the truncation is exact at grid
//! points. The spectral grid computation coincides with it exactly on the
//! mean-zero subspace; for general φ the true image has an O(|x|^{-α-1}) tail
//! outside B_N that no grid function can carry, while the kernel form still
//! returns the exact values at grid points.

use crate::error::Result;
use crate::fourier::{forward_fft, inverse_fft};
use crate::grid::{l2_norm_sq, wavelet, GridFunction, GridSpec, WaveletIndex};
use crate::padic::{pow_f64, PrimeContext};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Which realization of the operator to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpMode {
    Spectral,
    Kernel,
}

/// Twisted gamma factor Γ_p(s, π) = p^s ∫_{Z_p^×} π(t) χ_p(p^{-1}t) dt.
///
/// π and χ_p are constant on the cosets j + pZ_p of measure 1/p, so the
/// integral reduces to the quadratic Gauss sum:
/// Γ_p(s, π) = p^{s-1} Σ_{j=1}^{p-1} (j/p) exp(2πi j/p), of modulus p^{s-1/2}.
pub fn gamma_factor(s: f64, ctx: &PrimeContext) -> Complex64 {
    let p = ctx.p();
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 1..p as u64 {
        let (im, re) = (TAU * j as f64 / p as f64).sin_cos();
        gauss += ctx.legendre_total(j) as f64 * Complex64::new(re, im);
    }
    (p as f64).powf(s - 1.0) * gauss
}

/// Fourier multiplier of D̃^{α,π} at the dual grid points; symbol[0] = 0.
pub fn twisted_symbol(dual: &GridSpec, alpha: f64) -> Vec<f64> {
    let p = dual.p();
    let ctx = dual.context();
    // |ξ_b|^α depends on ord_p(b) only
    let k = dual.total_exp() as i32;
    let pows: Vec<f64> = (0..=k)
        .map(|e| pow_f64(p, dual.support_exp() - e).powf(alpha))
        .collect();
    (0..dual.len())
        .map(|b| {
            if b == 0 {
                0.0
            } else {
                let lead = dual.tables().lead[b];
                let sign = ctx.legendre_total((p - lead as u32) as u64) as f64;
                sign * pows[dual.tables().ordp[b] as usize]
            }
        })
        .collect()
}

/// Spectral application: F^{-1}(m · Fφ), the fast path.
pub fn apply_spectral(phi: &GridFunction, alpha: f64) -> GridFunction {
    let mut hat = forward_fft(phi);
    let symbol = twisted_symbol(hat.spec(), alpha);
    for (v, m) in hat.values_mut().iter_mut().zip(&symbol) {
        *v *= m;
    }
    inverse_fft(&hat)
}

/// Kernel application: the exact finite sum, O(P · nnz(φ)).
pub fn apply_kernel(phi: &GridFunction, alpha: f64) -> GridFunction {
    let spec = phi.spec();
    let p = spec.p();
    let ctx = spec.context();
    let len = spec.len();

    // K[b] = π(-y_b) |y_b|^{-α-1}; K[0] = 0 encodes the vanishing inner shells.
    let k = spec.total_exp() as i32;
    let pows: Vec<f64> = (0..=k)
        .map(|e| pow_f64(p, spec.support_exp() - e).powf(-alpha - 1.0))
        .collect();
    let mut weights = vec![0.0f64; len];
    for b in 1..len {
        let lead = spec.tables().lead[b];
        let sign = ctx.legendre_total((p - lead as u32) as u64) as f64;
        weights[b] = sign * pows[spec.tables().ordp[b] as usize];
    }
    // Σ_b K[b] vanishes shell by shell by character balance; the computed sum
    // carries only rounding noise but is kept so the difference form below is
    // evaluated as written.
    let weight_sum: f64 = weights.iter().sum();
    let scale = spec.cell_measure() / gamma_factor(-alpha, ctx);

    let support: Vec<(usize, Complex64)> = phi
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm_sqr() != 0.0)
        .map(|(s, v)| (s, *v))
        .collect();

    let values: Vec<Complex64> = (0..len)
        .into_par_iter()
        .map(|a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s, v) in &support {
                // b = a - s mod P so that φ(x_a - y_b) = φ(x_s)
                acc += weights[(a + len - s) % len] * v;
            }
            (acc - phi.values()[a] * weight_sum) * scale
        })
        .collect();

    GridFunction::from_values(spec, values).expect("same grid")
}

pub fn apply(phi: &GridFunction, alpha: f64, mode: OpMode) -> GridFunction {
    match mode {
        OpMode::Spectral => apply_spectral(phi, alpha),
        OpMode::Kernel => apply_kernel(phi, alpha),
    }
}

/// Eigenvalue of Θ_{r,n,j} under D̃^{α,π}: π^{-1}(j) p^{(1-r)α}.
pub fn wavelet_eigenvalue(ctx: &PrimeContext, idx: &WaveletIndex, alpha: f64) -> f64 {
    let sign = ctx.legendre_total(idx.digit as u64) as f64;
    sign * pow_f64(ctx.p(), 1 - idx.scale).powf(alpha)
}

/// Relative eigenrelation residual ‖D̃Θ - μΘ‖₂ / ‖Θ‖₂.
pub fn eigen_residual(spec: &GridSpec, idx: &WaveletIndex, alpha: f64, mode: OpMode) -> Result<f64> {
    let theta = wavelet(spec, idx)?;
    let mu = wavelet_eigenvalue(spec.context(), idx, alpha);
    let image = apply(&theta, alpha, mode);
    let mut diff = image;
    diff.add_scaled(&theta, Complex64::new(-mu, 0.0))?;
    Ok((l2_norm_sq(&diff) / l2_norm_sq(&theta)).sqrt())
}

/// Largest eigenrelation residual over every representable index.
pub fn max_eigen_residual(spec: &GridSpec, alpha: f64, mode: OpMode) -> (f64, usize) {
    let indices = crate::grid::representable_wavelets(spec);
    let count = indices.len();
    let max = indices
        .into_par_iter()
        .map(|idx| eigen_residual(spec, &idx, alpha, mode).expect("enumerated index"))
        .reduce(|| 0.0, f64::max);
    (max, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{haar_integral, indicator, representable_wavelets, Ball};

    fn spec(p: u32, n: i32, m: i32) -> GridSpec {
        GridSpec::new(p, n, m).unwrap()
    }

    fn random_mean_zero(spec: &GridSpec, seed: u64) -> GridFunction {
        let mut f = GridFunction::from_fn(spec, |a| {
            let t = (a as f64 + 2.0) * (seed as f64 + 1.5);
            Complex64::new((t * 0.912).sin(), (t * 0.577).cos())
        });
        let mean = haar_integral(&f) / pow_f64(spec.p(), spec.support_exp());
        for v in f.values_mut() {
            *v -= mean;
        }
        f
    }

    #[test]
    fn gamma_value_p5() {
        // 4-term Gauss sum: Γ_5(-1) = √5 / 25, real since 5 ≡ 1 mod 4
        let c = PrimeContext::new(5).unwrap();
        let g = gamma_factor(-1.0, &c);
        assert!((g.re - 5f64.sqrt() / 25.0).abs() < 1e-14);
        assert!(g.im.abs() < 1e-14);
    }

    #[test]
    fn gamma_value_p3() {
        // 2-term sum: Γ_3(-1) = i√3 / 9, purely imaginary since 3 ≡ 3 mod 4
        let c = PrimeContext::new(3).unwrap();
        let g = gamma_factor(-1.0, &c);
        assert!((g.im - 3f64.sqrt() / 9.0).abs() < 1e-14);
        assert!(g.re.abs() < 1e-14);
    }

    #[test]
    fn gamma_modulus() {
        for p in [3u32, 5, 7, 11, 13] {
            let c = PrimeContext::new(p).unwrap();
            for s in [-2.0, -1.0, -0.5, 0.5] {
                let g = gamma_factor(s, &c);
                let want = (p as f64).powf(s - 0.5);
                assert!((g.norm() - want).abs() < 1e-12 * want, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let c = PrimeContext::new(5).unwrap();
        assert_eq!(wavelet_eigenvalue(&c, &WaveletIndex::centered(0, 1), 1.0), 5.0);
        // residue vs non-residue digit flips the sign at fixed scale
        assert_eq!(wavelet_eigenvalue(&c, &WaveletIndex::centered(0, 4), 1.0), 5.0);
        assert_eq!(wavelet_eigenvalue(&c, &WaveletIndex::centered(0, 2), 1.0), -5.0);
        // general α
        let ev = wavelet_eigenvalue(&c, &WaveletIndex::centered(-1, 1), 0.5);
        assert!((ev - 25f64.powf(0.5)).abs() < 1e-14);
    }

    #[test]
    fn eigenrelation_spectral_small() {
        for p in [3u32, 5, 7] {
            let s = spec(p, 1, 2);
            for idx in representable_wavelets(&s) {
                let r = eigen_residual(&s, &idx, 1.0, OpMode::Spectral).unwrap();
                assert!(r < 1e-12, "p={p} {idx:?}: {r}");
            }
        }
    }

    #[test]
    fn eigenrelation_kernel_small() {
        for p in [3u32, 5, 7] {
            let s = spec(p, 1, 2);
            for idx in representable_wavelets(&s) {
                let r = eigen_residual(&s, &idx, 1.0, OpMode::Kernel).unwrap();
                assert!(r < 1e-10, "p={p} {idx:?}: {r}");
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let s = spec(5, 1, 1);
        let z = GridFunction::zeros(&s);
        assert!(l2_norm_sq(&apply_spectral(&z, 1.0)) == 0.0);
        assert!(l2_norm_sq(&apply_kernel(&z, 1.0)) == 0.0);
    }

    #[test]
    fn kernel_matches_spectral_on_mean_zero() {
        for (p, n, m) in [(3u32, 2, 2), (5, 1, 2), (7, 1, 1)] {
            let s = spec(p, n, m);
            for alpha in [0.5, 1.0, 2.0] {
                let phi = random_mean_zero(&s, p as u64 + alpha as u64);
                let a = apply_spectral(&phi, alpha);
                let b = apply_kernel(&phi, alpha);
                let mut diff = a;
                diff.add_scaled(&b, Complex64::new(-1.0, 0.0)).unwrap();
                let rel = l2_norm_sq(&diff).sqrt() / l2_norm_sq(&phi).sqrt();
                assert!(rel < 1e-9, "p={p} α={alpha}: {rel}");
            }
        }
    }

    #[test]
    fn output_is_mean_zero() {
        let s = spec(5, 2, 1);
        let phi = GridFunction::from_fn(&s, |a| Complex64::new(1.0 + a as f64, 0.3));
        assert!(haar_integral(&apply_spectral(&phi, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn kernel_image_of_unit_indicator() {
        // vanishes on Z_p; equals Γ^{-1} π(-x) |x|^{-α-1} outside
        let s = spec(5, 2, 1);
        let alpha = 1.0;
        let omega = indicator(&s, &Ball::unit()).unwrap();
        let image = apply_kernel(&omega, alpha);
        let gamma_inv = gamma_factor(-alpha, s.context()).inv();
        for a in 0..s.len() {
            let norm = s.norm_of_index(a);
            if norm <= 1.0 {
                assert!(image.values()[a].norm() < 1e-11, "on Z_p at {a}");
            } else {
                let lead = s.tables().lead[a];
                let sign = s.context().legendre_total((5 - lead as u32) as u64) as f64;
                let want = gamma_inv * sign * norm.powf(-alpha - 1.0);
                assert!((image.values()[a] - want).norm() < 1e-11, "at {a}");
            }
        }
    }

    #[test]
    fn linearity_of_kernel_form() {
        let s = spec(3, 1, 2);
        let idx = WaveletIndex::centered(0, 1);
        let th = wavelet(&s, &idx).unwrap();
        let mut scaled = th.clone();
        scaled.scale(Complex64::new(2.5, -0.5));
        let a = apply_kernel(&scaled, 1.0);
        let mut b = apply_kernel(&th, 1.0);
        b.scale(Complex64::new(2.5, -0.5));
        let mut diff = a;
        diff.add_scaled(&b, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(l2_norm_sq(&diff).sqrt() < 1e-12);
    }

    #[test]
    fn parity_conjugation() {
        // D̃ (Pφ) = π(-1) P (D̃ φ) with Pφ(x) = φ(-x)
        for p in [3u32, 5] {
            let s = spec(p, 1, 2);
            let ctx = s.context();
            let pi_minus_one = ctx.legendre_total(p as u64 - 1) as f64;
            let phi = random_mean_zero(&s, 11);
            let len = s.len();
            let reflected = GridFunction::from_fn(&s, |a| phi.values()[(len - a) % len]);
            let lhs = apply_spectral(&reflected, 1.0);
            let image = apply_spectral(&phi, 1.0);
            let mut rhs = GridFunction::from_fn(&s, |a| image.values()[(len - a) % len]);
            rhs.scale(Complex64::new(pi_minus_one, 0.0));
            let mut diff = lhs;
            diff.add_scaled(&rhs, Complex64::new(-1.0, 0.0)).unwrap();
            assert!(l2_norm_sq(&diff).sqrt() < 1e-10, "p={p}");
        }
    }
}
