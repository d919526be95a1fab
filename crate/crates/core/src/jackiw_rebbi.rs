//! Solvers for the p-adic Jackiw-Rebbi model: a two-component Dirac-type
//! Hamiltonian with a sign-changing locally constant mass term,
//!
//!   H = [[ m(x)v²,  -ivħ D̃_x ], [ -ivħ D̃_x,  -m(x)v² ]],
//!
//! i.e. mass on σ_z and the twisted derivative on σ_x. The eigenvalue problem
//! is posed on Q_p^× only; the interface point x = 0 carries no mass value,
//! Hamiltonian outputs at 0 are forced to 0 and residual norms exclude it.
//!
//! In each constant-mass region a Θ-shaped two-component ansatz solves the
//! 2×2 system when E² = m²v⁴ - v²ħ²λ² with λ = p^{1-r}; the zero mode glues
//! the plus- and minus-region solutions with the common spinor direction
//! [i, 1]ᵀ at E = 0. Whether the glued state is a pointwise eigenstate of the
//! nonlocal H on all of Q_p^× is measured, not asserted: the kernel-oracle
//! residual is reported in `ResidualReport::global_hamiltonian` and is not an
//! acceptance gate.
//!
//! The 2D model couples a 1D zero mode in x with a character wave in y under
//! H = m(x)v²σ_z - iħv D̃_x σ_x + ħv D̃_y σ_y. Since σ_y [i,1]ᵀ = -[i,1]ᵀ,
//! the constructed edge states disperse as E = -ħv π^{-1}(s) p^{1-l}: one
//! chiral branch per character class, magnitudes ħv p^{1-l}.

use crate::error::{Error, Result};
use crate::grid::{
    l2_norm_sq, l2_norm_sq_without_origin, wavelet, Ball, GridFunction, GridSpec, WaveletIndex,
};
use crate::operators::{apply, OpMode};
use crate::padic::{pow_f64, pow_u64, PAdicScalar, Sign};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Effective velocity and ħ; both strictly positive.
#[derive(Clone, Copy, Debug)]
pub struct PhysicalParams {
    pub v: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(v: f64, hbar: f64) -> Result<Self> {
        if v > 0.0 && hbar > 0.0 && v.is_finite() && hbar.is_finite() {
            Ok(Self { v, hbar })
        } else {
            Err(Error::NonPositiveParams)
        }
    }

    pub fn unit() -> Self {
        Self { v: 1.0, hbar: 1.0 }
    }
}

/// Locally constant mass profile on Q_p^×: negative on the minus cone,
/// positive on the plus cone, undefined at 0.
#[derive(Clone, Debug)]
pub enum MassProfile {
    /// m(x) = -m1 on Q_p^-, +m2 on Q_p^+.
    TwoValue { m1: f64, m2: f64 },
    /// Explicit disjoint sign-pure balls with signed values.
    Piecewise(Vec<(Ball, f64)>),
}

impl MassProfile {
    pub fn two_value(m1: f64, m2: f64) -> Result<Self> {
        if m1 > 0.0 && m2 > 0.0 {
            Ok(Self::TwoValue { m1, m2 })
        } else {
            Err(Error::MassProfile("two-value masses must be positive".into()))
        }
    }

    /// Checks the piecewise invariants against a grid: balls representable,
    /// pairwise disjoint, sign-pure with matching value sign, covering every
    /// nonzero grid point.
    pub fn validate(&self, spec: &GridSpec) -> Result<()> {
        match self {
            Self::TwoValue { m1, m2 } => {
                if *m1 > 0.0 && *m2 > 0.0 {
                    Ok(())
                } else {
                    Err(Error::MassProfile("two-value masses must be positive".into()))
                }
            }
            Self::Piecewise(pieces) => {
                for (ball, value) in pieces {
                    if !ball.representable_on(spec) {
                        return Err(Error::MassProfile("ball not representable".into()));
                    }
                    match ball.sign_class(spec) {
                        Some(Sign::Plus) if *value > 0.0 => {}
                        Some(Sign::Minus) if *value < 0.0 => {}
                        Some(_) => {
                            return Err(Error::MassProfile(
                                "value sign does not match the ball's cone".into(),
                            ))
                        }
                        None => {
                            return Err(Error::MassProfile(
                                "ball is not sign-pure (contains 0)".into(),
                            ))
                        }
                    }
                }
                for a in 1..spec.len() {
                    let covers =
                        pieces.iter().filter(|(b, _)| b.contains_index(spec, a)).count();
                    if covers != 1 {
                        return Err(Error::MassProfile(format!(
                            "point index {a} covered by {covers} balls"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Mass at a nonzero grid point.
    pub fn mass_at_index(&self, spec: &GridSpec, a: usize) -> Result<f64> {
        if a == 0 {
            return Err(Error::MassUndefinedAtZero);
        }
        match self {
            Self::TwoValue { m1, m2 } => match spec.sign_of_index(a) {
                Sign::Plus => Ok(*m2),
                Sign::Minus => Ok(-*m1),
                Sign::Zero => Err(Error::MassUndefinedAtZero),
            },
            Self::Piecewise(pieces) => pieces
                .iter()
                .find(|(b, _)| b.contains_index(spec, a))
                .map(|(_, value)| *value)
                .ok_or_else(|| Error::MassProfile(format!("no ball covers index {a}"))),
        }
    }

    /// Mass at an exact scalar (the covering value); errors at x = 0.
    pub fn mass_at(&self, spec: &GridSpec, x: &PAdicScalar) -> Result<f64> {
        if x.is_zero() {
            return Err(Error::MassUndefinedAtZero);
        }
        match self {
            Self::TwoValue { m1, m2 } => match spec.context().sign_class(x) {
                Sign::Plus => Ok(*m2),
                Sign::Minus => Ok(-*m1),
                Sign::Zero => Err(Error::MassUndefinedAtZero),
            },
            Self::Piecewise(_) => self.mass_at_index(spec, spec.index_of_point(x)?),
        }
    }

    /// Per-index mass table (index 0 unused, set to 0).
    fn table(&self, spec: &GridSpec) -> Result<Vec<f64>> {
        let mut t = vec![0.0; spec.len()];
        for (a, slot) in t.iter_mut().enumerate().skip(1) {
            *slot = self.mass_at_index(spec, a)?;
        }
        Ok(t)
    }
}

/// Two-component wavefunction on a common grid.
#[derive(Clone, Debug)]
pub struct SpinorField {
    up: GridFunction,
    down: GridFunction,
}

impl SpinorField {
    pub fn new(up: GridFunction, down: GridFunction) -> Result<Self> {
        if up.spec() != down.spec() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { up, down })
    }

    pub fn zeros(spec: &GridSpec) -> Self {
        Self { up: GridFunction::zeros(spec), down: GridFunction::zeros(spec) }
    }

    pub fn spec(&self) -> &GridSpec {
        self.up.spec()
    }

    pub fn up(&self) -> &GridFunction {
        &self.up
    }

    pub fn down(&self) -> &GridFunction {
        &self.down
    }

    /// ‖(φ₁,φ₂)‖² = ‖φ₁‖₂² + ‖φ₂‖₂².
    pub fn norm_sq(&self) -> f64 {
        l2_norm_sq(&self.up) + l2_norm_sq(&self.down)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq_without_origin(&self) -> f64 {
        l2_norm_sq_without_origin(&self.up) + l2_norm_sq_without_origin(&self.down)
    }

    pub fn scale(&mut self, c: Complex64) {
        self.up.scale(c);
        self.down.scale(c);
    }

    pub fn add_scaled(&mut self, other: &SpinorField, c: Complex64) -> Result<()> {
        self.up.add_scaled(&other.up, c)?;
        self.down.add_scaled(&other.down, c)
    }
}

/// The three Pauli matrices (row-major 2×2).
pub struct PauliSet;

impl PauliSet {
    pub fn sigma_x() -> [[Complex64; 2]; 2] {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        [[o, l], [l, o]]
    }

    pub fn sigma_y() -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        [[o, -I], [I, o]]
    }

    pub fn sigma_z() -> [[Complex64; 2]; 2] {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        [[l, o], [o, -l]]
    }

    /// σ_i² = I, pairwise anticommutation, σ_x σ_y = i σ_z.
    pub fn algebra_holds() -> bool {
        fn mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
            let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for (k, bk) in b.iter().enumerate() {
                        c[i][j] += a[i][k] * bk[j];
                    }
                }
            }
            c
        }
        fn close(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> bool {
            a.iter().flatten().zip(b.iter().flatten()).all(|(u, v)| (u - v).norm() < 1e-15)
        }
        let (sx, sy, sz) = (Self::sigma_x(), Self::sigma_y(), Self::sigma_z());
        let id = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                  [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        let isz = mul(&sx, &sy);
        let mut want = sz;
        for row in &mut want {
            for v in row.iter_mut() {
                *v *= I;
            }
        }
        let anti = |a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]| {
            let ab = mul(a, b);
            let ba = mul(b, a);
            ab.iter()
                .flatten()
                .zip(ba.iter().flatten())
                .all(|(u, v)| (u + v).norm() < 1e-15)
        };
        close(&mul(&sx, &sx), &id)
            && close(&mul(&sy, &sy), &id)
            && close(&mul(&sz, &sz), &id)
            && close(&isz, &want)
            && anti(&sx, &sy)
            && anti(&sy, &sz)
            && anti(&sx, &sz)
    }
}

/// Residuals attached to a constructed state. `per_region_algebra` is the
/// worst 2×2 linear-system residual of the spinor components per constant-mass
/// region; `global_hamiltonian` is ‖HΨ - EΨ‖₂/‖Ψ‖₂ over Q_p^× with the kernel
/// oracle. The latter is reported, never gated, for glued interface states.
#[derive(Clone, Copy, Debug)]
pub struct ResidualReport {
    pub per_region_algebra: f64,
    pub global_hamiltonian: f64,
}

/// A constructed eigenstate record.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub e: f64,
    pub r_minus: i32,
    pub r_plus: i32,
    pub j_minus: u8,
    pub j_plus: u8,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub norm: f64,
    pub field: SpinorField,
    pub residual_report: ResidualReport,
}

/// Matching condition between the two regions at the interface:
/// √(m₂²v⁴-E²)/(m₂v²-E) - √(m₁²v⁴-E²)/(E+m₁v²). Zero exactly at E = 0;
/// algebraic elimination reduces the root condition to 2E(m₁+m₂)v² = 0.
pub fn matching_residual(e: f64, m1: f64, m2: f64, params: &PhysicalParams) -> Result<f64> {
    let v2 = params.v * params.v;
    let bound = m1.min(m2) * v2;
    if e.abs() > bound {
        return Err(Error::OutsideBracket { e, bound });
    }
    let den_plus = m2 * v2 - e;
    let den_minus = e + m1 * v2;
    if den_plus == 0.0 || den_minus == 0.0 {
        return Err(Error::MatchingPole(e));
    }
    let lhs = (m2 * m2 * v2 * v2 - e * e).sqrt() / den_plus;
    let rhs = (m1 * m1 * v2 * v2 - e * e).sqrt() / den_minus;
    Ok(lhs - rhs)
}

/// Result of snapping a mass onto the discrete scale ladder λ = p^{1-r}.
#[derive(Clone, Copy, Debug)]
pub struct ScaleFit {
    pub r: i32,
    pub effective_mass: f64,
    pub snapped: bool,
}

/// Scale exponent r with p^{1-r} = m v / ħ. Exact within 1e-9 of an integer,
/// or snapped to the nearest rung when `snap` is set (the effective mass
/// ħ p^{1-r} / v is reported either way).
pub fn admissible_scale(p: u32, m: f64, params: &PhysicalParams, snap: bool) -> Result<ScaleFit> {
    if m <= 0.0 || !m.is_finite() {
        return Err(Error::NonPositiveParams);
    }
    let t = 1.0 - (m * params.v / params.hbar).ln() / (p as f64).ln();
    let r = t.round();
    let exact = (t - r).abs() <= 1e-9;
    if !exact && !snap {
        return Err(Error::InadmissibleMass { mass: m, scale: t });
    }
    let r = r as i32;
    Ok(ScaleFit {
        r,
        effective_mass: params.hbar * pow_f64(p, 1 - r) / params.v,
        snapped: !exact,
    })
}

fn check_wavelet(spec: &GridSpec, idx: &WaveletIndex) -> Result<()> {
    if idx.representable_on(spec) {
        Ok(())
    } else {
        Err(Error::WaveletNotRepresentable {
            r: idx.scale,
            shift_exp: idx.shift_den_exp,
            j: idx.digit,
        })
    }
}

/// Unnormalized glued interface shape [i,1]ᵀ (Θ_+ on the plus cone, Θ_- on the
/// minus cone, value 1 at the origin where the branches agree).
fn interface_shape(
    spec: &GridSpec,
    r_minus: i32,
    r_plus: i32,
    j_minus: u8,
    j_plus: u8,
) -> Result<SpinorField> {
    let ctx = spec.context();
    if ctx.legendre(j_plus as u64)? != 1 {
        return Err(Error::CharacterClass(format!("j_plus = {j_plus} must be a residue")));
    }
    if ctx.legendre(j_minus as u64)? != -1 {
        return Err(Error::CharacterClass(format!("j_minus = {j_minus} must be a non-residue")));
    }
    let idx_plus = WaveletIndex::centered(r_plus, j_plus);
    let idx_minus = WaveletIndex::centered(r_minus, j_minus);
    check_wavelet(spec, &idx_plus)?;
    check_wavelet(spec, &idx_minus)?;
    let theta_plus = wavelet(spec, &idx_plus)?;
    let theta_minus = wavelet(spec, &idx_minus)?;
    debug_assert!((theta_plus.values()[0] - theta_minus.values()[0]).norm() == 0.0);

    let selected = GridFunction::from_fn(spec, |a| match spec.sign_of_index(a) {
        Sign::Plus => theta_plus.values()[a],
        Sign::Minus => theta_minus.values()[a],
        Sign::Zero => theta_plus.values()[0],
    });
    let mut up = selected.clone();
    up.scale(I);
    SpinorField::new(up, selected)
}

/// The E = 0 interface mode for masses m_i = ħ p^{1-r_i} / v.
///
/// Normalization: ‖Ψ‖² = c²(p^{r_+} + p^{r_-}) with the signed half-ball
/// measures, so c = √(v m₁ m₂ / (pħ (m₁+m₂))) gives a unit state; on scale
/// pairs with r_+ + r_- = 0 this coincides with √(pħ / (v(m₂+m₁))).
pub fn build_zero_mode(
    spec: &GridSpec,
    r_minus: i32,
    r_plus: i32,
    j_minus: u8,
    j_plus: u8,
    params: &PhysicalParams,
) -> Result<BoundState> {
    let p = spec.p();
    let lambda_plus = pow_f64(p, 1 - r_plus);
    let lambda_minus = pow_f64(p, 1 - r_minus);
    let m2 = params.hbar * lambda_plus / params.v;
    let m1 = params.hbar * lambda_minus / params.v;

    let mut field = interface_shape(spec, r_minus, r_plus, j_minus, j_plus)?;
    let c = (params.v * m1 * m2 / (p as f64 * params.hbar * (m1 + m2))).sqrt();
    field.scale(Complex64::new(c, 0.0));
    let norm = field.norm();

    let v2 = params.v * params.v;
    let vh = params.v * params.hbar;
    // region algebra at E = 0: (-m₁v²)(i) + i vħλ₋ = 0 and (m₂v²)(i) - i vħλ₊ = 0
    let alg_minus = (vh * lambda_minus - m1 * v2).abs() / (m1 * v2);
    let alg_plus = (vh * lambda_plus - m2 * v2).abs() / (m2 * v2);

    let profile = MassProfile::two_value(m1, m2)?;
    let h = apply_hamiltonian_1d(&field, &profile, params, OpMode::Kernel)?;
    let global = h.norm_sq_without_origin().sqrt() / field.norm_sq_without_origin().sqrt();

    Ok(BoundState {
        e: 0.0,
        r_minus,
        r_plus,
        j_minus,
        j_plus,
        lambda_minus,
        lambda_plus,
        norm,
        field,
        residual_report: ResidualReport {
            per_region_algebra: alg_minus.max(alg_plus),
            global_hamiltonian: global,
        },
    })
}

/// One term of the interface superposition.
#[derive(Clone, Copy, Debug)]
pub struct SuperpositionTerm {
    pub r_minus: i32,
    pub r_plus: i32,
    pub j_minus: u8,
    pub j_plus: u8,
}

/// Default term list at fixed scales: the (p-1)/2 pairs zipping the residue
/// and non-residue classes.
pub fn default_interface_terms(spec: &GridSpec, r_minus: i32, r_plus: i32) -> Vec<SuperpositionTerm> {
    let ctx = spec.context();
    ctx.residues()
        .into_iter()
        .zip(ctx.non_residues())
        .map(|(j_plus, j_minus)| SuperpositionTerm { r_minus, r_plus, j_minus, j_plus })
        .collect()
}

/// Normalized superposition of glued interface shapes.
pub fn build_interface_superposition(
    spec: &GridSpec,
    _params: &PhysicalParams,
    terms: &[SuperpositionTerm],
) -> Result<SpinorField> {
    if terms.is_empty() {
        return Err(Error::EmptyTermList);
    }
    let mut total = SpinorField::zeros(spec);
    for t in terms {
        let shape = interface_shape(spec, t.r_minus, t.r_plus, t.j_minus, t.j_plus)?;
        total.add_scaled(&shape, Complex64::new(1.0, 0.0))?;
    }
    let n = total.norm();
    total.scale(Complex64::new(1.0 / n, 0.0));
    Ok(total)
}

/// Energy branch of a bulk state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyBranch {
    Plus,
    Minus,
}

/// Bulk eigenstate on a sign-pure ball away from the origin, where the mass is
/// the constant M_s: spinor [i vħ μ/(M_s v² - E), 1]ᵀ Θ_{r,n,j} with
/// μ = π^{-1}(j) p^{1-r} and E = ±√(M_s² v⁴ - ħ²v²λ²).
pub fn build_bulk_state(
    spec: &GridSpec,
    ball: &Ball,
    j: u8,
    params: &PhysicalParams,
    profile: &MassProfile,
    branch: EnergyBranch,
) -> Result<BoundState> {
    let p = spec.p();
    if !ball.representable_on(spec) {
        return Err(Error::BallNotRepresentable);
    }
    if ball.sign_class(spec).is_none() {
        return Err(Error::MassProfile("bulk ball must be sign-pure and avoid 0".into()));
    }
    let idx = wavelet_index_of_ball(spec, ball, j)?;
    check_wavelet(spec, &idx)?;

    // mass must be a single constant on the ball
    let mut mass = None;
    for a in 1..spec.len() {
        if ball.contains_index(spec, a) {
            let m = profile.mass_at_index(spec, a)?;
            match mass {
                None => mass = Some(m),
                Some(prev) if prev == m => {}
                Some(prev) => {
                    return Err(Error::MassProfile(format!(
                        "profile not constant on the ball: {prev} vs {m}"
                    )))
                }
            }
        }
    }
    let signed_mass = mass.ok_or_else(|| Error::MassProfile("ball contains no grid point".into()))?;
    let m_abs = signed_mass.abs();

    let lambda = pow_f64(p, 1 - ball.radius_exp);
    let v2 = params.v * params.v;
    let disc = m_abs * m_abs * v2 * v2 - params.hbar * params.hbar * v2 * lambda * lambda;
    if disc < 0.0 {
        return Err(Error::ImaginaryEnergy(disc));
    }
    let e = match branch {
        EnergyBranch::Plus => disc.sqrt(),
        EnergyBranch::Minus => -disc.sqrt(),
    };

    let mu = spec.context().legendre(j as u64)? as f64 * lambda;
    let phi1 = I * (params.v * params.hbar * mu) / (signed_mass * v2 - e);
    let theta = wavelet(spec, &idx)?;
    let mut up = theta.clone();
    up.scale(phi1);
    let mut field = SpinorField::new(up, theta)?;
    let n = field.norm();
    field.scale(Complex64::new(1.0 / n, 0.0));

    let alg = ((signed_mass * v2 - e) * phi1 - I * params.v * params.hbar * mu).norm()
        / (m_abs * v2);
    let h = apply_hamiltonian_1d(&field, profile, params, OpMode::Kernel)?;
    let mut diff = h;
    diff.add_scaled(&field, Complex64::new(-e, 0.0))?;
    let global = diff.norm_sq_without_origin().sqrt() / field.norm_sq_without_origin().sqrt();

    Ok(BoundState {
        e,
        r_minus: ball.radius_exp,
        r_plus: ball.radius_exp,
        j_minus: j,
        j_plus: j,
        lambda_minus: lambda,
        lambda_plus: lambda,
        norm: field.norm(),
        field,
        residual_report: ResidualReport { per_region_algebra: alg, global_hamiltonian: global },
    })
}

/// Wavelet index whose support is exactly the given ball: r from the radius,
/// shift n = {p^r c}_p from the center.
fn wavelet_index_of_ball(spec: &GridSpec, ball: &Ball, j: u8) -> Result<WaveletIndex> {
    let p = spec.p();
    let r = ball.radius_exp;
    // n = fractional class of c p^r: c = num / p^k ⟹ n = num / p^{k - r} mod Z_p
    let k_eff = ball.center_den_exp as i32 - r;
    if k_eff <= 0 {
        // center inside p^{-r} Z_p: ball contains 0
        return Err(Error::MassProfile("ball is centered on the origin's coset".into()));
    }
    let modulus = pow_u64(p, k_eff as u32);
    let mut num = ball.center_num.rem_euclid(modulus as i64) as u64;
    let mut k = k_eff as u32;
    if num == 0 {
        return Err(Error::MassProfile("ball is centered on the origin's coset".into()));
    }
    while num.is_multiple_of(p as u64) {
        num /= p as u64;
        k -= 1;
    }
    Ok(WaveletIndex::new(r, num, k, j))
}

/// Apply the 1D Hamiltonian. Output at the origin is 0 by convention.
pub fn apply_hamiltonian_1d(
    field: &SpinorField,
    profile: &MassProfile,
    params: &PhysicalParams,
    mode: OpMode,
) -> Result<SpinorField> {
    let spec = field.spec();
    let mass = profile.table(spec)?;
    let v2 = params.v * params.v;
    let ivh = I * params.v * params.hbar;

    let d_up = apply(field.up(), 1.0, mode);
    let d_down = apply(field.down(), 1.0, mode);

    let up = GridFunction::from_fn(spec, |a| {
        if a == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            mass[a] * v2 * field.up().values()[a] - ivh * d_down.values()[a]
        }
    });
    let down = GridFunction::from_fn(spec, |a| {
        if a == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            -ivh * d_up.values()[a] - mass[a] * v2 * field.down().values()[a]
        }
    });
    SpinorField::new(up, down)
}

/// Two-component field on a tensor grid; index = ix * Py + iy.
#[derive(Clone, Debug)]
pub struct SpinorField2D {
    pub spec_x: GridSpec,
    pub spec_y: GridSpec,
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
}

impl SpinorField2D {
    /// Tensor product of a 1D spinor in x with a scalar factor in y.
    pub fn tensor(xf: &SpinorField, yf: &GridFunction) -> Self {
        let py = yf.spec().len();
        let px = xf.spec().len();
        let mut up = Vec::with_capacity(px * py);
        let mut down = Vec::with_capacity(px * py);
        for ix in 0..px {
            for iy in 0..py {
                up.push(xf.up().values()[ix] * yf.values()[iy]);
                down.push(xf.down().values()[ix] * yf.values()[iy]);
            }
        }
        Self { spec_x: xf.spec().clone(), spec_y: yf.spec().clone(), up, down }
    }

    /// ‖Ψ‖² with the product Haar measure.
    pub fn norm_sq(&self) -> f64 {
        let w = self.spec_x.cell_measure() * self.spec_y.cell_measure();
        let s: f64 = self.up.iter().chain(&self.down).map(|v| v.norm_sqr()).sum();
        s * w
    }

    /// Norm² excluding the x = 0 column (the 2D interface line).
    pub fn norm_sq_without_interface(&self) -> f64 {
        let py = self.spec_y.len();
        let w = self.spec_x.cell_measure() * self.spec_y.cell_measure();
        let s: f64 = self.up[py..].iter().chain(&self.down[py..]).map(|v| v.norm_sqr()).sum();
        s * w
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in self.up.iter_mut().chain(self.down.iter_mut()) {
            *v *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        for (v, w) in self.up.iter_mut().zip(&other.up) {
            *v += c * w;
        }
        for (v, w) in self.down.iter_mut().zip(&other.down) {
            *v += c * w;
        }
    }
}

fn apply_along_x(
    field: &SpinorField2D,
    component: &[Complex64],
    mode: OpMode,
) -> Vec<Complex64> {
    let px = field.spec_x.len();
    let py = field.spec_y.len();
    let mut out = vec![Complex64::new(0.0, 0.0); px * py];
    for iy in 0..py {
        let col: Vec<Complex64> = (0..px).map(|ix| component[ix * py + iy]).collect();
        let g = GridFunction::from_values(&field.spec_x, col).expect("column length");
        let image = apply(&g, 1.0, mode);
        for ix in 0..px {
            out[ix * py + iy] = image.values()[ix];
        }
    }
    out
}

fn apply_along_y(
    field: &SpinorField2D,
    component: &[Complex64],
    mode: OpMode,
) -> Vec<Complex64> {
    let px = field.spec_x.len();
    let py = field.spec_y.len();
    let mut out = vec![Complex64::new(0.0, 0.0); px * py];
    for ix in 0..px {
        let row = component[ix * py..(ix + 1) * py].to_vec();
        let g = GridFunction::from_values(&field.spec_y, row).expect("row length");
        let image = apply(&g, 1.0, mode);
        out[ix * py..(ix + 1) * py].copy_from_slice(image.values());
    }
    out
}

/// Apply H = m(x)v²σ_z - iħv D̃_x σ_x + ħv D̃_y σ_y. The x = 0 column of the
/// output is forced to 0 and excluded from residuals (mass undefined there).
pub fn apply_hamiltonian_2d(
    field: &SpinorField2D,
    profile: &MassProfile,
    params: &PhysicalParams,
    mode: OpMode,
) -> Result<SpinorField2D> {
    let mass = profile.table(&field.spec_x)?;
    let v2 = params.v * params.v;
    let ivh = I * params.v * params.hbar;
    let hv = params.hbar * params.v;
    let py = field.spec_y.len();

    let dx_up = apply_along_x(field, &field.up, mode);
    let dx_down = apply_along_x(field, &field.down, mode);
    let dy_up = apply_along_y(field, &field.up, mode);
    let dy_down = apply_along_y(field, &field.down, mode);

    let mut out = SpinorField2D {
        spec_x: field.spec_x.clone(),
        spec_y: field.spec_y.clone(),
        up: vec![Complex64::new(0.0, 0.0); field.up.len()],
        down: vec![Complex64::new(0.0, 0.0); field.down.len()],
    };
    for (ix, &mx) in mass.iter().enumerate().skip(1) {
        for iy in 0..py {
            let t = ix * py + iy;
            out.up[t] = mx * v2 * field.up[t] - ivh * dx_down[t] - I * hv * dy_down[t];
            out.down[t] = -ivh * dx_up[t] - mx * v2 * field.down[t] + I * hv * dy_up[t];
        }
    }
    Ok(out)
}

/// A 2D edge state record: 1D interface factor in x, character wave in y.
#[derive(Clone, Debug)]
pub struct EdgeState2D {
    pub e: f64,
    pub l: i32,
    pub s: u8,
    pub x_state: BoundState,
    pub y_factor: GridFunction,
    pub norm: f64,
    pub residual_report: ResidualReport,
}

/// Edge dispersion of the constructed states: E = -ħv π^{-1}(s) p^{1-l}.
pub fn edge_energy(p: u32, l: i32, s: u8, params: &PhysicalParams) -> Result<f64> {
    let ctx = crate::padic::PrimeContext::new(p)?;
    Ok(-params.hbar * params.v * ctx.legendre(s as u64)? as f64 * pow_f64(p, 1 - l))
}

/// Build the 2D edge state Ψ(x,y) = Ψ_±(x) Θ_{l,m,s}(y), normalized.
#[allow(clippy::too_many_arguments)]
pub fn solve_edge_2d(
    spec_x: &GridSpec,
    spec_y: &GridSpec,
    r_minus: i32,
    r_plus: i32,
    j_minus: u8,
    j_plus: u8,
    l: i32,
    m_shift: (u64, u32),
    s: u8,
    params: &PhysicalParams,
) -> Result<EdgeState2D> {
    let x_state = build_zero_mode(spec_x, r_minus, r_plus, j_minus, j_plus, params)?;
    let y_idx = WaveletIndex::new(l, m_shift.0, m_shift.1, s);
    check_wavelet(spec_y, &y_idx)?;
    let mut y_factor = wavelet(spec_y, &y_idx)?;
    let ynorm = l2_norm_sq(&y_factor).sqrt();
    y_factor.scale(Complex64::new(1.0 / ynorm, 0.0));

    let e = edge_energy(spec_x.p(), l, s, params)?;
    let tensor = SpinorField2D::tensor(&x_state.field, &y_factor);
    let norm = tensor.norm_sq().sqrt();

    // y-only residual: ‖ħv D̃_y σ_y Ψ - EΨ‖ / ‖Ψ‖ (supported on the x-support
    // automatically; exact because the y factor is a single eigenwave)
    let dy_up = apply_along_y(&tensor, &tensor.up, OpMode::Kernel);
    let dy_down = apply_along_y(&tensor, &tensor.down, OpMode::Kernel);
    let hv = params.hbar * params.v;
    let mut ysq = 0.0;
    for t in 0..tensor.up.len() {
        let ru = -I * hv * dy_down[t] - e * tensor.up[t];
        let rd = I * hv * dy_up[t] - e * tensor.down[t];
        ysq += ru.norm_sqr() + rd.norm_sqr();
    }
    ysq *= spec_x.cell_measure() * spec_y.cell_measure();
    let y_residual = ysq.sqrt() / norm;

    let profile = MassProfile::two_value(
        params.hbar * x_state.lambda_minus / params.v,
        params.hbar * x_state.lambda_plus / params.v,
    )?;
    let h = apply_hamiltonian_2d(&tensor, &profile, params, OpMode::Kernel)?;
    let mut diff = h;
    diff.add_scaled(&tensor, Complex64::new(-e, 0.0));
    let global = diff.norm_sq_without_interface().sqrt()
        / tensor.norm_sq_without_interface().sqrt();

    Ok(EdgeState2D {
        e,
        l,
        s,
        x_state,
        y_factor,
        norm,
        residual_report: ResidualReport { per_region_algebra: y_residual, global_hamiltonian: global },
    })
}

/// Bulk-exact 2D edge state for residual checks: the x factor is a single
/// sign-pure bulk wave at E = 0 (mass ħλ/v on its ball), so the full 2D
/// Hamiltonian residual vanishes to rounding.
pub fn solve_edge_2d_bulk(
    spec_x: &GridSpec,
    spec_y: &GridSpec,
    x_ball: &Ball,
    j: u8,
    l: i32,
    s: u8,
    params: &PhysicalParams,
) -> Result<(EdgeState2D, MassProfile)> {
    let p = spec_x.p();
    let lambda = pow_f64(p, 1 - x_ball.radius_exp);
    let m = params.hbar * lambda / params.v;
    let sign = x_ball.sign_class(spec_x).ok_or(Error::BallNotRepresentable)?;
    // j's class must match the ball's cone so the E = 0 spinor is [i, 1]
    let want = if sign == Sign::Plus { 1 } else { -1 };
    if spec_x.context().legendre(j as u64)? != want {
        return Err(Error::CharacterClass("bulk digit class must match the ball cone".into()));
    }
    let profile = MassProfile::TwoValue { m1: m, m2: m };
    let x_state = build_bulk_state(spec_x, x_ball, j, params, &profile, EnergyBranch::Plus)?;

    let y_idx = WaveletIndex::new(l, 0, 0, s);
    check_wavelet(spec_y, &y_idx)?;
    let mut y_factor = wavelet(spec_y, &y_idx)?;
    let ynorm = l2_norm_sq(&y_factor).sqrt();
    y_factor.scale(Complex64::new(1.0 / ynorm, 0.0));

    let e = edge_energy(p, l, s, params)?;
    let tensor = SpinorField2D::tensor(&x_state.field, &y_factor);
    let norm = tensor.norm_sq().sqrt();

    let h = apply_hamiltonian_2d(&tensor, &profile, params, OpMode::Kernel)?;
    let mut diff = h;
    diff.add_scaled(&tensor, Complex64::new(-e, 0.0));
    let global =
        diff.norm_sq_without_interface().sqrt() / tensor.norm_sq_without_interface().sqrt();

    let report = ResidualReport {
        per_region_algebra: x_state.residual_report.per_region_algebra,
        global_hamiltonian: global,
    };
    Ok((EdgeState2D { e, l, s, x_state, y_factor, norm, residual_report: report }, profile))
}
