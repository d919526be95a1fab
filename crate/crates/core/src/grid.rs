//! Finite quotient grids for locally constant compactly supported functions.
//!
//! The grid with support exponent N and constancy exponent M holds one complex
//! value per coset of p^M Z_p inside B_N = {|x|_p ≤ p^N}: P = p^{N+M} points
//! x_a = p^{-N} a, a = 0..P-1, whose base-p digits are the digits of a. Every
//! statement of exactness in this crate is relative to a fixed (N, M); the
//! quotient is our truncation choice, the underlying theory never fixes one.
//!
//! Besides indicators and Haar integration the module builds the ball-supported
//! character waves Θ_{r,n,j}(x) = χ_p(p^{-1} j (p^r x - n)) Ω(|p^r x - n|_p)
//! (the Kozyrev wavelet family): supp Θ = p^{-r} n + p^{-r} Z_p, a ball of Haar
//! measure p^r, on which Θ takes exact p-th roots of unity. On a grid the
//! representable indices are 1 - M ≤ r and r + k ≤ N (p^k the denominator of
//! n); together with the constants they form a complete orthogonal basis.

use crate::error::{Error, Result};
use crate::padic::{ord_p, pow_f64, pow_u64, PAdicScalar, Phase, PrimeContext, Sign};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Per-grid lookup tables; shared between a grid and its dual.
#[derive(Debug)]
pub struct GridTables {
    /// roots[t] = exp(2πi t / P). Single source of every twiddle factor.
    pub roots: Vec<Complex64>,
    /// ord_p(a) for a > 0; ordp[0] = K (sentinel, never used as a valuation).
    pub ordp: Vec<u16>,
    /// Leading base-p digit of the unit part of a; 0 for a = 0.
    pub lead: Vec<u8>,
    /// Sign class of x_a under the quadratic character: ±1, and 0 at a = 0.
    pub sign: Vec<i8>,
}

/// The finite quotient p^{-N} Z_p / p^M Z_p.
#[derive(Clone, Debug)]
pub struct GridSpec {
    ctx: Arc<PrimeContext>,
    support_exp: i32,
    constancy_exp: i32,
    tables: Arc<GridTables>,
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p()
            && self.support_exp == other.support_exp
            && self.constancy_exp == other.constancy_exp
    }
}
impl Eq for GridSpec {}

impl GridSpec {
    /// Grid with functions supported in B_N and constant on p^M Z_p cosets.
    pub fn new(p: u32, support_exp: i32, constancy_exp: i32) -> Result<Self> {
        let ctx = Arc::new(PrimeContext::new(p)?);
        Self::with_context(ctx, support_exp, constancy_exp)
    }

    pub fn with_context(ctx: Arc<PrimeContext>, support_exp: i32, constancy_exp: i32) -> Result<Self> {
        if support_exp < 0 || constancy_exp < 1 {
            return Err(Error::InvalidGrid { n: support_exp, m: constancy_exp });
        }
        // point count must stay addressable; reject p^{N+M} beyond 2^31
        let mut len: u128 = 1;
        for _ in 0..(support_exp + constancy_exp) {
            len *= ctx.p() as u128;
            if len > (1 << 31) {
                return Err(Error::InvalidGrid { n: support_exp, m: constancy_exp });
            }
        }
        Ok(Self::build(ctx, support_exp, constancy_exp))
    }

    fn build(ctx: Arc<PrimeContext>, support_exp: i32, constancy_exp: i32) -> Self {
        let p = ctx.p();
        let k = (support_exp + constancy_exp) as u32;
        let len = pow_u64(p, k) as usize;
        let mut roots = Vec::with_capacity(len);
        for t in 0..len {
            let (s, c) = (TAU * t as f64 / len as f64).sin_cos();
            roots.push(Complex64::new(c, s));
        }
        let mut ordp_t = vec![0u16; len];
        let mut lead = vec![0u8; len];
        let mut sign = vec![0i8; len];
        ordp_t[0] = k as u16;
        for a in 1..len {
            let e = ord_p(a as u64, p);
            let u = a as u64 / pow_u64(p, e);
            ordp_t[a] = e as u16;
            lead[a] = (u % p as u64) as u8;
            sign[a] = ctx.legendre_total(lead[a] as u64);
        }
        Self {
            ctx,
            support_exp,
            constancy_exp,
            tables: Arc::new(GridTables { roots, ordp: ordp_t, lead, sign }),
        }
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn context(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }

    /// Support exponent N: functions vanish outside B_N.
    pub fn support_exp(&self) -> i32 {
        self.support_exp
    }

    /// Constancy exponent M: functions are constant on p^M Z_p cosets.
    pub fn constancy_exp(&self) -> i32 {
        self.constancy_exp
    }

    /// Total digit budget K = N + M.
    pub fn total_exp(&self) -> u32 {
        (self.support_exp + self.constancy_exp) as u32
    }

    /// Number of grid points P = p^{N+M}.
    pub fn len(&self) -> usize {
        self.tables.ordp.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Haar weight of one coset cell, p^{-M}.
    pub fn cell_measure(&self) -> f64 {
        pow_f64(self.p(), -self.constancy_exp)
    }

    pub fn tables(&self) -> &GridTables {
        &self.tables
    }

    /// The dual grid: support and constancy exponents swap roles. Tables are
    /// index-based and shared as-is.
    pub fn dual(&self) -> GridSpec {
        GridSpec {
            ctx: Arc::clone(&self.ctx),
            support_exp: self.constancy_exp,
            constancy_exp: self.support_exp,
            tables: Arc::clone(&self.tables),
        }
    }

    /// Valuation of the point x_a (None at a = 0).
    pub fn ord_of_index(&self, a: usize) -> Option<i32> {
        if a == 0 {
            None
        } else {
            Some(self.tables.ordp[a] as i32 - self.support_exp)
        }
    }

    /// |x_a|_p as f64 (0.0 at a = 0).
    pub fn norm_of_index(&self, a: usize) -> f64 {
        match self.ord_of_index(a) {
            None => 0.0,
            Some(v) => pow_f64(self.p(), -v),
        }
    }

    pub fn sign_of_index(&self, a: usize) -> Sign {
        match self.tables.sign[a] {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }

    /// x_a = p^{-N} a as an exact scalar with all K digits of a.
    pub fn point_of_index(&self, a: usize) -> Result<PAdicScalar> {
        let len = self.len();
        if a >= len {
            return Err(Error::IndexOutOfRange { index: a, len });
        }
        if a == 0 {
            return Ok(PAdicScalar::zero(self.p()));
        }
        Ok(PAdicScalar::from_fraction(
            self.p(),
            a as i64,
            self.support_exp as u32,
            self.total_exp() as usize - self.tables.ordp[a] as usize,
        ))
    }

    /// Quotient projection back to the index; inverse of `point_of_index`.
    pub fn index_of_point(&self, x: &PAdicScalar) -> Result<usize> {
        let ord = match x.ord() {
            None => return Ok(0),
            Some(v) => v,
        };
        let e = ord + self.support_exp;
        let k = self.total_exp() as i32;
        if e < 0 || e >= k {
            return Err(Error::PointNotOnGrid);
        }
        let keep = (k - e) as usize;
        let mut unit = 0u64;
        for (i, &d) in x.digits().iter().enumerate().take(keep) {
            unit += d as u64 * pow_u64(self.p(), i as u32);
        }
        Ok((unit * pow_u64(self.p(), e as u32)) as usize)
    }

    /// Monna coordinate of x_a: digits d_i of the expansion x_a = Σ d_i p^i
    /// map to Σ d_i p^{-i-1}. Digit reversal onto the real line; plotting aid
    /// only, no metric meaning.
    pub fn monna_of_index(&self, a: usize) -> f64 {
        let p = self.p() as u64;
        let mut a = a as u64;
        let mut acc = 0.0;
        // digit at p-power (t - N) contributes p^{N-1-t}
        for t in 0..self.total_exp() as i32 {
            let d = (a % p) as f64;
            acc += d * pow_f64(self.p(), self.support_exp - 1 - t);
            a /= p;
        }
        acc
    }

    /// Base-p digits of a, least significant first, as a compact string.
    pub fn digit_string(&self, a: usize) -> String {
        let p = self.p() as u64;
        let mut a = a as u64;
        let mut s = String::with_capacity(self.total_exp() as usize);
        for _ in 0..self.total_exp() {
            s.push(std::char::from_digit((a % p) as u32, 16).unwrap());
            a /= p;
        }
        s
    }
}

/// A ball c + p^{-r} Z_p = {x : |x - c|_p ≤ p^r}; center is an exact rational
/// with p-power denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center_num: i64,
    pub center_den_exp: u32,
    pub radius_exp: i32,
}

impl Ball {
    pub fn new(center_num: i64, center_den_exp: u32, radius_exp: i32) -> Self {
        Self { center_num, center_den_exp, radius_exp }
    }

    /// The unit ball Z_p.
    pub fn unit() -> Self {
        Self::new(0, 0, 0)
    }

    pub fn centered_at_zero(radius_exp: i32) -> Self {
        Self::new(0, 0, radius_exp)
    }

    /// |center|_p as an exponent: Some(e) with |c| = p^e, None for c = 0.
    fn center_norm_exp(&self, p: u32) -> Option<i32> {
        if self.center_num == 0 {
            None
        } else {
            Some(self.center_den_exp as i32 - ord_p(self.center_num.unsigned_abs(), p) as i32)
        }
    }

    /// Representable iff the ball sits inside B_N and is no finer than a cell.
    pub fn representable_on(&self, spec: &GridSpec) -> bool {
        let in_radius = self.radius_exp >= -spec.constancy_exp() && self.radius_exp <= spec.support_exp();
        let in_center = match self.center_norm_exp(spec.p()) {
            None => true,
            Some(e) => e <= spec.support_exp(),
        };
        in_radius && in_center
    }

    /// Exact membership test for the grid point x_a.
    pub fn contains_index(&self, spec: &GridSpec, a: usize) -> bool {
        let p = spec.p();
        let n = spec.support_exp();
        let (mut c_num, mut k) = (self.center_num, self.center_den_exp as i32);
        if c_num == 0 {
            k = 0;
        }
        while k > n && c_num % p as i64 == 0 {
            c_num /= p as i64;
            k -= 1;
        }
        if k > n {
            // |c| = p^k exceeds every grid norm, so |x_a - c| = p^k throughout
            return k <= self.radius_exp;
        }
        let d = n.max(k);
        // x_a - c = (a p^{d-N} - c_num p^{d-k}) / p^d, with exponents ≤ N
        let lhs = a as i128 * pow_u64(p, (d - n) as u32) as i128;
        let rhs = c_num as i128 * pow_u64(p, (d - k) as u32) as i128;
        let num = lhs - rhs;
        if num == 0 {
            return true;
        }
        let mut v = 0i32;
        let mut m = num.unsigned_abs();
        let p = p as u128;
        while m.is_multiple_of(p) {
            m /= p;
            v += 1;
        }
        // |x_a - c| = p^{d - v} ≤ p^radius  ⟺  v ≥ d - radius
        v >= d - self.radius_exp
    }

    /// Sign class of the ball when it is sign-pure (does not contain 0 and all
    /// points share a leading digit), else None.
    pub fn sign_class(&self, spec: &GridSpec) -> Option<Sign> {
        let e = self.center_norm_exp(spec.p())?;
        if e <= self.radius_exp {
            return None; // contains or touches 0 at grid scales
        }
        // leading digit of the center decides for every point of the ball
        let p = spec.p();
        let unit = self.center_num.unsigned_abs() / pow_u64(p, ord_p(self.center_num.unsigned_abs(), p));
        let mut lead = (unit % p as u64) as u8;
        if self.center_num < 0 {
            lead = (p as u64 - lead as u64) as u8 % p as u8;
        }
        match spec.context().legendre_total(lead as u64) {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// A complex-valued function on a grid (one value per coset representative).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(spec: &GridSpec) -> Self {
        Self { spec: spec.clone(), values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_values(spec: &GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { spec: spec.clone(), values })
    }

    pub fn from_fn(spec: &GridSpec, f: impl Fn(usize) -> Complex64) -> Self {
        Self { spec: spec.clone(), values: (0..spec.len()).map(f).collect() }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &GridFunction, c: Complex64) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch);
        }
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += c * w;
        }
        Ok(())
    }
}

/// Characteristic function of a representable ball. Exactly p^{r+M} points are
/// set for a ball of radius p^r (ball measure over cell measure).
pub fn indicator(spec: &GridSpec, ball: &Ball) -> Result<GridFunction> {
    if !ball.representable_on(spec) {
        return Err(Error::BallNotRepresentable);
    }
    Ok(GridFunction::from_fn(spec, |a| {
        if ball.contains_index(spec, a) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Sign class of a scalar; `Zero` at 0, else the quadratic character class.
pub fn sign_class(ctx: &PrimeContext, x: &PAdicScalar) -> Sign {
    ctx.sign_class(x)
}

/// Haar integral p^{-M} Σ_a φ(x_a). Exact for the represented function.
pub fn haar_integral(phi: &GridFunction) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for v in phi.values() {
        acc += v;
    }
    acc * phi.spec().cell_measure()
}

/// Haar integral restricted to one sign class.
///
/// Cells around nonzero points are sign-pure and contribute fully; the cell at
/// the origin splits exactly half/half between the classes at every sub-grid
/// scale, so it contributes ½ p^{-M} φ(0). The point 0 itself belongs to
/// neither class.
pub fn haar_integral_signed(phi: &GridFunction, sign: Sign) -> Complex64 {
    let spec = phi.spec();
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, v) in phi.values().iter().enumerate() {
        if spec.sign_of_index(a) == sign {
            acc += v;
        }
    }
    if sign != Sign::Zero {
        acc += 0.5 * phi.values()[0];
    }
    acc * spec.cell_measure()
}

/// L² inner product ⟨φ, ψ⟩ = p^{-M} Σ conj(φ) ψ.
pub fn inner(phi: &GridFunction, psi: &GridFunction) -> Result<Complex64> {
    if phi.spec() != psi.spec() {
        return Err(Error::GridMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, v) in phi.values().iter().zip(psi.values()) {
        acc += u.conj() * v;
    }
    Ok(acc * phi.spec().cell_measure())
}

pub fn l2_norm_sq(phi: &GridFunction) -> f64 {
    let mut acc = 0.0;
    for v in phi.values() {
        acc += v.norm_sqr();
    }
    acc * phi.spec().cell_measure()
}

pub fn l2_norm(phi: &GridFunction) -> f64 {
    l2_norm_sq(phi).sqrt()
}

/// L² norm with the origin cell excluded (residuals live on Q_p^×).
pub fn l2_norm_sq_without_origin(phi: &GridFunction) -> f64 {
    let mut acc = 0.0;
    for v in &phi.values()[1..] {
        acc += v.norm_sqr();
    }
    acc * phi.spec().cell_measure()
}

/// Index (r, n, j) of a ball-supported character wave Θ_{r,n,j}.
///
/// The shift n = shift_num / p^shift_den_exp is a coset label in Q_p / Z_p,
/// stored gcd-free with 0 ≤ n < 1 (n = 0 ⟺ shift_den_exp = 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WaveletIndex {
    pub scale: i32,
    pub shift_num: u64,
    pub shift_den_exp: u32,
    pub digit: u8,
}

impl WaveletIndex {
    pub fn new(scale: i32, shift_num: u64, shift_den_exp: u32, digit: u8) -> Self {
        Self { scale, shift_num, shift_den_exp, digit }
    }

    /// Shorthand for a shift-0 wave centered at the origin.
    pub fn centered(scale: i32, digit: u8) -> Self {
        Self::new(scale, 0, 0, digit)
    }

    fn valid_for(&self, p: u32) -> bool {
        let digit_ok = self.digit >= 1 && (self.digit as u32) < p;
        let shift_ok = if self.shift_den_exp == 0 {
            self.shift_num == 0
        } else {
            self.shift_num > 0
                && self.shift_num < pow_u64(p, self.shift_den_exp)
                && !self.shift_num.is_multiple_of(p as u64)
        };
        digit_ok && shift_ok
    }

    /// Grid bounds: constancy needs r ≥ 1 - M, support fit needs r + k ≤ N.
    pub fn representable_on(&self, spec: &GridSpec) -> bool {
        self.valid_for(spec.p())
            && self.scale >= 1 - spec.constancy_exp()
            && self.scale + self.shift_den_exp as i32 <= spec.support_exp()
    }

    /// Support ball p^{-r} n + p^{-r} Z_p (radius and Haar measure p^r).
    pub fn support_ball(&self, p: u32) -> Ball {
        let r = self.scale;
        let k = self.shift_den_exp as i32;
        if self.shift_num == 0 {
            Ball::centered_at_zero(r)
        } else if r + k >= 0 {
            // center n / p^r = shift_num / p^{k+r}
            Ball::new(self.shift_num as i64, (r + k) as u32, r)
        } else {
            Ball::new(self.shift_num as i64 * pow_u64(p, (-(r + k)) as u32) as i64, 0, r)
        }
    }

    fn not_representable(&self) -> Error {
        Error::WaveletNotRepresentable {
            r: self.scale,
            shift_exp: self.shift_den_exp,
            j: self.digit,
        }
    }
}

/// The wave Θ_{r,n,j}(x) = χ_p(p^{-1} j (p^r x - n)) Ω(|p^r x - n|_p).
///
/// Values on the support ball are exact p-th roots of unity drawn from the
/// grid's root table; zero elsewhere.
pub fn wavelet(spec: &GridSpec, idx: &WaveletIndex) -> Result<GridFunction> {
    if !idx.representable_on(spec) {
        return Err(idx.not_representable());
    }
    let p = spec.p() as u64;
    let pp = spec.len() as u64;
    let n_exp = spec.support_exp();
    let r = idx.scale;
    let k = idx.shift_den_exp as i32;
    // p^r x_a - n = u_a / p^{N-r} with u_a = a - shift_num * p^{N-r-k};
    // on the support p^{N-r} | u_a and the phase is {j (u_a / p^{N-r}) / p}.
    let stride = pow_u64(spec.p(), (n_exp - r) as u32);
    let offset = idx.shift_num * pow_u64(spec.p(), (n_exp - r - k) as u32);
    let root_step = (pp / p) as usize;
    let mut f = GridFunction::zeros(spec);
    let values = f.values_mut();
    let mut a = offset as usize;
    while a < pp as usize {
        let quot = (a as u64 - offset) / stride;
        let ph = (idx.digit as u64 * quot) % p;
        values[a] = spec.tables().roots[ph as usize * root_step];
        a += stride as usize;
    }
    Ok(f)
}

/// Exact phase of Θ_{r,n,j} at grid index a, or None off the support (or for
/// an index that is not representable on the grid).
pub fn wavelet_phase(spec: &GridSpec, idx: &WaveletIndex, a: usize) -> Option<Phase> {
    if !idx.representable_on(spec) {
        return None;
    }
    let p = spec.p() as u64;
    let stride = pow_u64(spec.p(), (spec.support_exp() - idx.scale) as u32);
    let offset =
        idx.shift_num * pow_u64(spec.p(), (spec.support_exp() - idx.scale - idx.shift_den_exp as i32) as u32);
    let a = a as u64;
    if a < offset || !(a - offset).is_multiple_of(stride) {
        return None;
    }
    let quot = (a - offset) / stride;
    Some(Phase::new(spec.p(), (idx.digit as u64 * quot) % p, 1))
}

/// Every index representable on the grid, in deterministic order. Together
/// with the constant function these span the whole grid: there are P - 1.
pub fn representable_wavelets(spec: &GridSpec) -> Vec<WaveletIndex> {
    let p = spec.p() as u64;
    let mut out = Vec::new();
    for r in (1 - spec.constancy_exp())..=spec.support_exp() {
        let kmax = (spec.support_exp() - r) as u32;
        for k in 0..=kmax {
            if k == 0 {
                for j in 1..p as u8 {
                    out.push(WaveletIndex::new(r, 0, 0, j));
                }
            } else {
                for num in 1..pow_u64(spec.p(), k) {
                    if !num.is_multiple_of(p) {
                        for j in 1..p as u8 {
                            out.push(WaveletIndex::new(r, num, k, j));
                        }
                    }
                }
            }
        }
    }
    out
}
