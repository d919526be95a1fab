//! Fourier transform on grid functions, realized exactly as a DFT of size
//! P = p^{N+M}.
//!
//! With ξ_b = p^{-M} b and x_a = p^{-N} a the character pairing is exact:
//! {ξ_b x_a}_p = (ab mod P)/P, so the forward transform
//!
//!   (Fφ)(ξ_b) = p^{-M} Σ_a exp(+2πi ab / P) φ(x_a)
//!
//! is the true integral ∫ χ_p(ξx) φ(x) dx of the represented function. A
//! function on the (N, M) grid transforms onto the (M, N) dual grid. The
//! inverse is the forward transform followed by index negation; applying the
//! forward twice returns the parity image φ(-x).
//!
//! Two implementations: `forward`/`inverse` are the naive O(P²) sums, used as
//! oracles; `forward_fft`/`inverse_fft` are radix-p decimation-in-time with
//! every twiddle factor drawn from the grid's single root table.

use crate::error::Result;
use crate::grid::{GridFunction, GridSpec, WaveletIndex};
use crate::padic::{pow_f64, pow_u64};
use num_complex::Complex64;

/// Naive forward transform; exact up to one rounding per term.
pub fn forward(phi: &GridFunction) -> GridFunction {
    let spec = phi.spec();
    let len = spec.len();
    let roots = &spec.tables().roots;
    let measure = spec.cell_measure();
    let mut out = Vec::with_capacity(len);
    for b in 0..len {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, v) in phi.values().iter().enumerate() {
            acc += roots[a * b % len] * v;
        }
        out.push(acc * measure);
    }
    GridFunction::from_values(&spec.dual(), out).expect("dual grid has the same size")
}

/// Naive inverse transform: forward then index negation a ↦ -a mod P.
pub fn inverse(psi: &GridFunction) -> GridFunction {
    negate_indices(&forward(psi))
}

/// Radix-p fast transform; agrees with `forward` to ~1e-13 absolute.
pub fn forward_fft(phi: &GridFunction) -> GridFunction {
    forward_fft_counted(phi).0
}

/// Fast inverse: fast forward then index negation.
pub fn inverse_fft(psi: &GridFunction) -> GridFunction {
    negate_indices(&forward_fft(psi))
}

/// Fast transform returning the number of complex multiplications performed,
/// for the P·log_p P complexity smoke check.
pub fn forward_fft_counted(phi: &GridFunction) -> (GridFunction, u64) {
    let spec = phi.spec();
    let p = spec.p() as usize;
    let roots = &spec.tables().roots;
    let mut mults = 0u64;
    let mut data = vec![Complex64::new(0.0, 0.0); spec.len()];
    fft_pow_radix(phi.values(), 0, 1, &mut data, p, roots, &mut mults);
    let measure = spec.cell_measure();
    for v in &mut data {
        *v *= measure;
    }
    (
        GridFunction::from_values(&spec.dual(), data).expect("dual grid has the same size"),
        mults,
    )
}

const MAX_RADIX: usize = 16;

/// DFT with kernel exp(+2πi ab / n) for n = p^k, decimation in time.
/// Reads the input through (offset, stride) so the recursion never copies;
/// sub-transforms land in disjoint chunks of `out` and are combined in place.
/// Twiddles come from the master table: ω_n^j = roots[j · (len(roots)/n)].
fn fft_pow_radix(
    input: &[Complex64],
    offset: usize,
    stride: usize,
    out: &mut [Complex64],
    p: usize,
    roots: &[Complex64],
    mults: &mut u64,
) {
    let n = out.len();
    if n == 1 {
        out[0] = input[offset];
        return;
    }
    let m = n / p;
    for (t, chunk) in out.chunks_mut(m).enumerate() {
        fft_pow_radix(input, offset + t * stride, stride * p, chunk, p, roots, mults);
    }
    let tw_stride = roots.len() / n;
    let mut tmp = [Complex64::new(0.0, 0.0); MAX_RADIX];
    for k in 0..m {
        for t in 0..p {
            tmp[t] = out[t * m + k];
        }
        for q in 0..p {
            let kk = q * m + k;
            let mut acc = tmp[0];
            for (t, sub) in tmp.iter().enumerate().take(p).skip(1) {
                acc += roots[(t * kk % n) * tw_stride] * sub;
                *mults += 1;
            }
            out[kk] = acc;
        }
    }
}

/// Reindex by a ↦ (-a mod P).
fn negate_indices(f: &GridFunction) -> GridFunction {
    let len = f.spec().len();
    let vals = f.values();
    let out: Vec<Complex64> = (0..len).map(|a| vals[(len - a) % len]).collect();
    GridFunction::from_values(f.spec(), out).expect("same grid")
}

/// Closed form of the transform of Θ_{r,n,j}:
///
///   F̂Θ(ξ) = p^r χ_p(p^{-r} n ξ) Ω(|p^{-r} ξ + p^{-1} j|_p),
///
/// supported on the coset of dual indices b ≡ (p - j) p^{M+r-1} mod p^{M+r}.
/// Built from exact integer phases; used as the oracle for the transform.
pub fn wavelet_transform_closed_form(spec: &GridSpec, idx: &WaveletIndex) -> Result<GridFunction> {
    if !idx.representable_on(spec) {
        return Err(crate::error::Error::WaveletNotRepresentable {
            r: idx.scale,
            shift_exp: idx.shift_den_exp,
            j: idx.digit,
        });
    }
    let p = spec.p();
    let dual = spec.dual();
    let len = spec.len() as u64;
    let m_exp = spec.constancy_exp();
    let r = idx.scale;
    let k = idx.shift_den_exp;
    let scale = pow_f64(p, r);
    let modulus = pow_u64(p, (m_exp + r) as u32);
    let residue = (p as u64 - idx.digit as u64) * pow_u64(p, (m_exp + r - 1) as u32);
    // phase exponent of χ_p(p^{-r} n ξ_b): num * b / p^{r+k+M}
    let e = r + k as i32 + m_exp;
    let mut out = vec![Complex64::new(0.0, 0.0); len as usize];
    let mut b = residue;
    while b < len {
        let val = if e <= 0 {
            Complex64::new(1.0, 0.0)
        } else {
            let ph = (idx.shift_num as u128 * b as u128 % pow_u64(p, e as u32) as u128) as u64;
            spec.tables().roots[(ph * pow_u64(p, spec.total_exp() - e as u32)) as usize]
        };
        out[b as usize] = scale * val;
        b += modulus;
    }
    GridFunction::from_values(&dual, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{
        haar_integral, indicator, inner, l2_norm_sq, representable_wavelets, wavelet, Ball,
    };
    use crate::padic::pow_f64;

    fn spec(p: u32, n: i32, m: i32) -> GridSpec {
        GridSpec::new(p, n, m).unwrap()
    }

    fn random_function(spec: &GridSpec, seed: u64) -> GridFunction {
        // deterministic pseudo-random values, no RNG dependency needed here
        GridFunction::from_fn(spec, |a| {
            let t = (a as f64 + 1.0) * (seed as f64 + 3.0);
            Complex64::new((t * 0.7311).sin(), (t * 1.3719).cos())
        })
    }

    fn max_abs_diff(a: &GridFunction, b: &GridFunction) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn unit_indicator_is_self_dual() {
        let s = spec(5, 1, 1);
        let omega = indicator(&s, &Ball::unit()).unwrap();
        let hat = forward(&omega);
        let dual_omega = indicator(hat.spec(), &Ball::unit()).unwrap();
        assert!(max_abs_diff(&hat, &dual_omega) < 1e-14);
    }

    #[test]
    fn delta_transforms_to_constant() {
        let s = spec(3, 1, 2);
        let mut delta = GridFunction::zeros(&s);
        delta.values_mut()[0] = Complex64::new(1.0, 0.0);
        let hat = forward(&delta);
        let want = s.cell_measure();
        assert!(hat.values().iter().all(|v| (v - Complex64::new(want, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn constant_inverts_to_delta_at_zero() {
        let s = spec(5, 1, 1);
        let dual = s.dual();
        let c = Complex64::new(0.4, -1.1);
        let psi = GridFunction::from_fn(&dual, |_| c);
        let phi = inverse(&psi);
        let expect = c * pow_f64(5, s.constancy_exp());
        assert!((phi.values()[0] - expect).norm() < 1e-12);
        assert!(phi.values()[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn inverse_forward_is_identity() {
        for (p, n, m) in [(3u32, 2, 2), (5, 1, 2), (7, 1, 1)] {
            let s = spec(p, n, m);
            let phi = random_function(&s, p as u64);
            let back = inverse(&forward(&phi));
            let rel = max_abs_diff(&phi, &back)
                / phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(rel < 1e-12, "p={p}: {rel}");
            let back_fast = inverse_fft(&forward_fft(&phi));
            let rel = max_abs_diff(&phi, &back_fast)
                / phi.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(rel < 1e-12, "fft p={p}: {rel}");
        }
    }

    #[test]
    fn double_forward_is_parity() {
        let s = spec(5, 1, 2);
        let phi = random_function(&s, 9);
        let twice = forward(&forward(&phi));
        let len = s.len();
        for a in 0..len {
            let mirrored = phi.values()[(len - a) % len];
            assert!((twice.values()[a] - mirrored).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_matches_naive() {
        for (p, n, m) in [(3u32, 3, 3), (5, 2, 2), (7, 1, 2)] {
            let s = spec(p, n, m);
            let phi = random_function(&s, 41 + p as u64);
            let diff = max_abs_diff(&forward(&phi), &forward_fft(&phi));
            assert!(diff < 1e-10, "p={p}: {diff}");
        }
    }

    #[test]
    fn fft_is_linear() {
        let s = spec(5, 2, 1);
        let f = random_function(&s, 1);
        let g = random_function(&s, 2);
        let (a, b) = (Complex64::new(0.3, -0.8), Complex64::new(-1.7, 0.2));
        let mut combo = GridFunction::zeros(&s);
        combo.add_scaled(&f, a).unwrap();
        combo.add_scaled(&g, b).unwrap();
        let mut rhs = GridFunction::zeros(&s.dual());
        rhs.add_scaled(&forward_fft(&f), a).unwrap();
        rhs.add_scaled(&forward_fft(&g), b).unwrap();
        assert!(max_abs_diff(&forward_fft(&combo), &rhs) < 1e-12);
    }

    #[test]
    fn plancherel_with_dual_measure() {
        for (p, n, m) in [(3u32, 2, 3), (5, 2, 1)] {
            let s = spec(p, n, m);
            let phi = random_function(&s, 7);
            let primal = l2_norm_sq(&phi);
            let dual = l2_norm_sq(&forward_fft(&phi));
            assert!((primal - dual).abs() < 1e-10 * primal, "p={p}");
        }
    }

    #[test]
    fn wavelet_transform_matches_closed_form() {
        for (p, n, m) in [(3u32, 2, 2), (5, 2, 2), (7, 1, 2)] {
            let s = spec(p, n, m);
            for idx in representable_wavelets(&s) {
                let th = wavelet(&s, &idx).unwrap();
                let closed = wavelet_transform_closed_form(&s, &idx).unwrap();
                let naive = forward(&th);
                let fast = forward_fft(&th);
                assert!(max_abs_diff(&naive, &closed) < 1e-12, "naive p={p} {idx:?}");
                assert!(max_abs_diff(&fast, &closed) < 1e-12, "fft p={p} {idx:?}");
            }
        }
    }

    #[test]
    fn wavelet_mean_zero_via_transform() {
        let s = spec(5, 2, 2);
        for idx in representable_wavelets(&s) {
            let th = wavelet(&s, &idx).unwrap();
            assert!(haar_integral(&th).norm() < 1e-13);
            // transform vanishes at ξ = 0
            assert!(forward_fft(&th).values()[0].norm() < 1e-13);
        }
    }

    #[test]
    fn operation_count_scales_like_p_log() {
        let p = 5u32;
        for k in 2..5i32 {
            let small = spec(p, 1, k - 1);
            let large = spec(p, 1, k);
            let phi_s = random_function(&small, 3);
            let phi_l = random_function(&large, 3);
            let (_, ops_s) = forward_fft_counted(&phi_s);
            let (_, ops_l) = forward_fft_counted(&phi_l);
            let ratio = ops_l as f64 / ops_s as f64;
            let logp = k as f64; // log_p of the smaller size
            let base = p as f64 * (1.0 + 1.0 / logp);
            assert!(
                ratio >= 0.8 * base && ratio <= 1.5 * base,
                "k={k}: ratio {ratio} vs window around {base}"
            );
        }
    }

    #[test]
    fn orthogonality_of_wavelets_survives_transform() {
        let s = spec(3, 2, 2);
        let ws = representable_wavelets(&s);
        let a = forward_fft(&wavelet(&s, &ws[0]).unwrap());
        let b = forward_fft(&wavelet(&s, &ws[ws.len() - 1]).unwrap());
        assert!(inner(&a, &b).unwrap().norm() < 1e-12);
    }
}
