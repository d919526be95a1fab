//! Exact p-adic scalar arithmetic at finite precision.
//!
//! A nonzero p-adic number is stored in canonical form x = p^v (d₀ + d₁p + …),
//! d₀ ≠ 0, with a fixed number of known digits. Zero is a distinguished value,
//! not "valuation = precision". On top of the scalars this module provides the
//! p-adic norm |x|_p = p^{-ord(x)}, the fractional part {x}_p, the additive
//! character x ↦ exp(2πi{x}_p) as an exact root of unity, the Legendre symbol,
//! and the quadratic character π(x) = (leading digit of x / p) that splits
//! Q_p^× into a "positive" cone (π = +1) and a "negative" cone (π = −1).
//!
//! p = 2 is rejected: the residue classes mod 2 cannot split evenly.

use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::Ratio;
use std::f64::consts::TAU;
use std::fmt;

/// Sign class of a p-adic number under the quadratic character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

/// A fixed odd prime together with its Legendre symbol table.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    p: u32,
    /// legendre[d] = (d/p) for d in 0..p, with legendre[0] = 0.
    legendre: Vec<i8>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::InvalidPrime(p as u64));
        }
        let mut legendre = vec![-1i8; p as usize];
        legendre[0] = 0;
        for z in 1..p as u64 {
            legendre[(z * z % p as u64) as usize] = 1;
        }
        Ok(Self { p, legendre })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Legendre symbol (j/p). Rejects j ≡ 0 mod p.
    pub fn legendre(&self, j: u64) -> Result<i8> {
        let r = (j % self.p as u64) as usize;
        if r == 0 {
            return Err(Error::LegendreZero);
        }
        Ok(self.legendre[r])
    }

    /// Total Legendre symbol with the convention (0/p) = 0.
    pub fn legendre_total(&self, j: u64) -> i8 {
        self.legendre[(j % self.p as u64) as usize]
    }

    /// Nonzero residues that are squares mod p, ascending.
    pub fn residues(&self) -> Vec<u8> {
        (1..self.p).filter(|&d| self.legendre[d as usize] == 1).map(|d| d as u8).collect()
    }

    /// Nonzero residues that are non-squares mod p, ascending.
    pub fn non_residues(&self) -> Vec<u8> {
        (1..self.p).filter(|&d| self.legendre[d as usize] == -1).map(|d| d as u8).collect()
    }

    /// Quadratic character π(x): Legendre symbol of the leading digit.
    /// Undefined (error) at x = 0; see [`PrimeContext::pi_total`].
    pub fn pi_character(&self, x: &PAdicScalar) -> Result<i8> {
        match x.leading_digit() {
            Some(d) => self.legendre(d as u64),
            None => Err(Error::SignOfZero),
        }
    }

    /// Total variant of π with π(0) = 0, mirroring (0/p) = 0.
    pub fn pi_total(&self, x: &PAdicScalar) -> i8 {
        match x.leading_digit() {
            Some(d) => self.legendre_total(d as u64),
            None => 0,
        }
    }

    /// Sign class of x: `Zero` at 0, else `Plus` iff π(x) = +1.
    pub fn sign_class(&self, x: &PAdicScalar) -> Sign {
        match self.pi_total(x) {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }
}

/// p^e for small nonnegative e, as u64.
pub fn pow_u64(p: u32, e: u32) -> u64 {
    (p as u64).pow(e)
}

/// p^e as f64, exact for the exponent ranges the grids use.
pub fn pow_f64(p: u32, e: i32) -> f64 {
    if e >= 0 {
        (p as f64).powi(e)
    } else {
        1.0 / (p as f64).powi(-e)
    }
}

/// Number of factors of p in a (a > 0).
pub fn ord_p(mut a: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut v = 0;
    while a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

fn digits_to_u64(p: u32, digits: &[u8]) -> u64 {
    let mut acc = 0u64;
    for &d in digits.iter().rev() {
        acc = acc * p as u64 + d as u64;
    }
    acc
}

fn u64_to_digits(p: u32, mut u: u64, len: usize) -> Vec<u8> {
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        digits.push((u % p as u64) as u8);
        u /= p as u64;
    }
    digits
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero,
    NonZero {
        valuation: i32,
        /// Base-p digits, least significant first; digits[0] ≠ 0.
        digits: Vec<u8>,
    },
}

/// An exact p-adic number at finite precision: valuation plus known digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicScalar {
    p: u32,
    repr: Repr,
}

impl PAdicScalar {
    pub fn zero(p: u32) -> Self {
        Self { p, repr: Repr::Zero }
    }

    /// Canonical nonzero scalar from valuation and digit list (d₀ ≠ 0).
    pub fn from_parts(p: u32, valuation: i32, digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() || digits[0] == 0 || digits.iter().any(|&d| d as u32 >= p) {
            return Err(Error::PointNotOnGrid);
        }
        Ok(Self { p, repr: Repr::NonZero { valuation, digits } })
    }

    /// Embed an integer with `precision` known digits.
    pub fn from_integer(p: u32, n: i64, precision: usize) -> Self {
        Self::from_fraction(p, n, 0, precision)
    }

    /// Embed num / p^den_exp with `precision` known digits of the unit part.
    pub fn from_fraction(p: u32, num: i64, den_exp: u32, precision: usize) -> Self {
        if num == 0 {
            return Self::zero(p);
        }
        let v = ord_p(num.unsigned_abs(), p);
        let unit = num / (pow_u64(p, v) as i64);
        let k = precision.max(1).min(max_precision(p));
        let modulus = pow_u64(p, k as u32);
        let u = (unit.rem_euclid(modulus as i64)) as u64;
        Self {
            p,
            repr: Repr::NonZero {
                valuation: v as i32 - den_exp as i32,
                digits: u64_to_digits(p, u, k),
            },
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Valuation ord(x); `None` is the +∞ sentinel for zero.
    pub fn ord(&self) -> Option<i32> {
        match &self.repr {
            Repr::Zero => None,
            Repr::NonZero { valuation, .. } => Some(*valuation),
        }
    }

    /// Number of known digits (0 for zero).
    pub fn precision(&self) -> usize {
        match &self.repr {
            Repr::Zero => 0,
            Repr::NonZero { digits, .. } => digits.len(),
        }
    }

    pub fn digits(&self) -> &[u8] {
        match &self.repr {
            Repr::Zero => &[],
            Repr::NonZero { digits, .. } => digits,
        }
    }

    pub fn leading_digit(&self) -> Option<u8> {
        self.digits().first().copied()
    }

    /// |x|_p = p^{-ord(x)}, with |0|_p = 0.
    pub fn norm(&self) -> Ratio<i64> {
        match self.ord() {
            None => Ratio::from_integer(0),
            Some(v) if v >= 0 => Ratio::new(1, pow_u64(self.p, v as u32) as i64),
            Some(v) => Ratio::from_integer(pow_u64(self.p, (-v) as u32) as i64),
        }
    }

    /// Fractional part {x}_p ∈ [0,1): the digits at negative powers of p.
    /// Digits beyond the known precision are taken as 0.
    pub fn frac_part(&self) -> Ratio<i64> {
        match &self.repr {
            Repr::Zero => Ratio::from_integer(0),
            Repr::NonZero { valuation, digits } => {
                if *valuation >= 0 {
                    return Ratio::from_integer(0);
                }
                let k = (-valuation) as usize;
                let head = if digits.len() >= k { &digits[..k] } else { &digits[..] };
                let num = digits_to_u64(self.p, head) as i64;
                Ratio::new(num, pow_u64(self.p, k as u32) as i64)
            }
        }
    }

    /// Additive character χ_p(x) = exp(2πi {x}_p) as an exact phase.
    pub fn chi(&self) -> Phase {
        match &self.repr {
            Repr::Zero => Phase::one(self.p),
            Repr::NonZero { valuation, digits } => {
                if *valuation >= 0 {
                    return Phase::one(self.p);
                }
                let k = (-valuation) as usize;
                let head = if digits.len() >= k { &digits[..k] } else { &digits[..] };
                Phase::new(self.p, digits_to_u64(self.p, head), k as u32)
            }
        }
    }

    /// Internal (valuation, unit mod p^k, k) view of a nonzero scalar.
    fn unit_view(&self) -> Option<(i32, u64, u32)> {
        match &self.repr {
            Repr::Zero => None,
            Repr::NonZero { valuation, digits } => {
                Some((*valuation, digits_to_u64(self.p, digits), digits.len() as u32))
            }
        }
    }

    fn from_unit(p: u32, valuation: i32, unit: u64, k: u32) -> Self {
        if k == 0 || unit == 0 {
            return Self::zero(p);
        }
        let t = ord_p(unit, p);
        if t >= k {
            return Self::zero(p);
        }
        let u = unit / pow_u64(p, t);
        Self {
            p,
            repr: Repr::NonZero {
                valuation: valuation + t as i32,
                digits: u64_to_digits(p, u, (k - t) as usize),
            },
        }
    }

    pub fn neg(&self) -> Self {
        match self.unit_view() {
            None => self.clone(),
            Some((v, u, k)) => {
                let m = pow_u64(self.p, k);
                Self::from_unit(self.p, v, (m - u) % m, k)
            }
        }
    }

    /// Exact sum at the shared absolute precision of the operands.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let (av, au, ak) = match self.unit_view() {
            None => return other.clone(),
            Some(t) => t,
        };
        let (bv, bu, bk) = match other.unit_view() {
            None => return self.clone(),
            Some(t) => t,
        };
        let vmin = av.min(bv);
        // absolute precision: digits are known up to p^min(av+ak, bv+bk)
        let abs = (av + ak as i32).min(bv + bk as i32);
        let k = (abs - vmin).max(0) as u32;
        if k == 0 {
            return Self::zero(self.p);
        }
        let modulus = pow_u64(self.p, k) as u128;
        let lift = |v: i32, u: u64| -> u128 {
            let shift = (v - vmin) as u32;
            (u as u128 * pow_u64(self.p, shift) as u128) % modulus
        };
        let s = (lift(av, au) + lift(bv, bu)) % modulus;
        Self::from_unit(self.p, vmin, s as u64, k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product at the smaller relative precision of the operands.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        match (self.unit_view(), other.unit_view()) {
            (Some((av, au, ak)), Some((bv, bu, bk))) => {
                let k = ak.min(bk);
                let modulus = pow_u64(self.p, k) as u128;
                let u = (au as u128 * bu as u128) % modulus;
                Self::from_unit(self.p, av + bv, u as u64, k)
            }
            _ => Self::zero(self.p),
        }
    }

    /// Multiply by p^e (shifts the valuation).
    pub fn scale_by_p_pow(&self, e: i32) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::NonZero { valuation, digits } => Self {
                p: self.p,
                repr: Repr::NonZero { valuation: valuation + e, digits: digits.clone() },
            },
        }
    }
}

/// Largest digit count kept so that p^K fits comfortably in u64.
fn max_precision(p: u32) -> usize {
    let mut k = 0usize;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        k += 1;
    }
    k
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::NonZero { valuation, digits } => {
                let ds: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                write!(f, "{}^{} * ({})", self.p, valuation, ds.join(","))
            }
        }
    }
}

/// An exact root of unity exp(2πi · numer / p^exp).
///
/// Products are integer additions of numerators at the common modulus, so
/// character identities hold bit-exactly; the complex value is materialized
/// on demand (grid code draws it from a shared root table instead).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    p: u32,
    numer: u64,
    exp: u32,
}

impl Phase {
    pub fn one(p: u32) -> Self {
        Self { p, numer: 0, exp: 0 }
    }

    /// exp(2πi numer / p^exp), canonicalized to a reduced fraction.
    pub fn new(p: u32, numer: u64, exp: u32) -> Self {
        let mut numer = numer % pow_u64(p, exp);
        let mut exp = exp;
        if numer == 0 {
            return Self::one(p);
        }
        while exp > 0 && numer.is_multiple_of(p as u64) {
            numer /= p as u64;
            exp -= 1;
        }
        Self { p, numer, exp }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    /// Modulus exponent: the phase is a p^exp-th root of unity.
    pub fn modulus_exp(&self) -> u32 {
        self.exp
    }

    /// Fraction of a full turn, in [0, 1).
    pub fn turns(&self) -> Ratio<i64> {
        Ratio::new(self.numer as i64, pow_u64(self.p, self.exp) as i64)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let exp = self.exp.max(other.exp);
        let m = pow_u64(self.p, exp) as u128;
        let a = self.numer as u128 * pow_u64(self.p, exp - self.exp) as u128 % m;
        let b = other.numer as u128 * pow_u64(self.p, exp - other.exp) as u128 % m;
        Self::new(self.p, ((a + b) % m) as u64, exp)
    }

    pub fn conj(&self) -> Self {
        let m = pow_u64(self.p, self.exp);
        Self::new(self.p, (m - self.numer) % m, self.exp)
    }

    pub fn value(&self) -> Complex64 {
        let angle = TAU * self.numer as f64 / pow_u64(self.p, self.exp) as f64;
        let (s, c) = angle.sin_cos();
        Complex64::new(c, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn rejects_two_and_composites() {
        assert!(PrimeContext::new(2).is_err());
        assert!(PrimeContext::new(9).is_err());
        assert!(PrimeContext::new(1).is_err());
        assert!(PrimeContext::new(3).is_ok());
    }

    #[test]
    fn legendre_balance_and_values() {
        for p in [3u32, 5, 7, 11, 13] {
            let c = ctx(p);
            let sum: i32 = (1..p as u64).map(|j| c.legendre(j).unwrap() as i32).sum();
            assert_eq!(sum, 0, "character balance at p = {p}");
            assert_eq!(c.residues().len(), ((p - 1) / 2) as usize);
            assert_eq!(c.non_residues().len(), ((p - 1) / 2) as usize);
            assert_eq!(c.legendre(1).unwrap(), 1);
        }
        // squares mod 5 = {1,4}; squares mod 7 = {1,2,4}
        assert_eq!(ctx(5).legendre(4).unwrap(), 1);
        assert_eq!(ctx(5).legendre(2).unwrap(), -1);
        assert_eq!(ctx(7).legendre(3).unwrap(), -1);
        assert!(ctx(5).legendre(10).is_err());
    }

    #[test]
    fn ord_examples() {
        assert_eq!(PAdicScalar::from_integer(5, 1, 8).ord(), Some(0));
        assert_eq!(PAdicScalar::from_integer(5, 5, 8).ord(), Some(1));
        // 50 = 2 * 5^2, so |50|_5 = 1/25
        let x = PAdicScalar::from_integer(5, 50, 8);
        assert_eq!(x.ord(), Some(2));
        assert_eq!(x.norm(), Ratio::new(1, 25));
        assert_eq!(PAdicScalar::zero(5).ord(), None);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(PAdicScalar::zero(5).norm(), Ratio::from_integer(0));
        assert_eq!(PAdicScalar::from_fraction(5, 1, 1, 8).norm(), Ratio::from_integer(5));
        // 75 = 3 * 5^2
        assert_eq!(PAdicScalar::from_integer(5, 75, 8).norm(), Ratio::new(1, 25));
    }

    #[test]
    fn frac_part_examples() {
        assert_eq!(PAdicScalar::from_integer(5, 3, 8).frac_part(), Ratio::from_integer(0));
        assert_eq!(PAdicScalar::from_fraction(5, 1, 1, 8).frac_part(), Ratio::new(1, 5));
        // 7/25 = (2 + 1*5)/5^2: digits 2,1 below the point
        assert_eq!(PAdicScalar::from_fraction(5, 7, 2, 8).frac_part(), Ratio::new(7, 25));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(PAdicScalar::zero(5).chi(), Phase::one(5));
        let x = PAdicScalar::from_fraction(5, 1, 1, 8);
        assert_eq!(x.chi(), Phase::new(5, 1, 1));
        let y = PAdicScalar::from_fraction(5, 7, 2, 8);
        assert_eq!(y.chi(), Phase::new(5, 7, 2));
        let v = y.chi().value();
        let expect = Complex64::from_polar(1.0, TAU * 7.0 / 25.0);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn pi_examples() {
        let c = ctx(5);
        // leading digit 4 is a square mod 5
        let x = PAdicScalar::from_integer(5, 4 + 5 * 3, 8);
        assert_eq!(c.pi_character(&x).unwrap(), 1);
        // pi depends only on the angular component
        let u = PAdicScalar::from_integer(5, 7, 8);
        let pu = c.pi_character(&u).unwrap();
        assert_eq!(c.pi_character(&u.scale_by_p_pow(3)).unwrap(), pu);
        assert_eq!(c.pi_character(&PAdicScalar::from_integer(5, 2, 8)).unwrap(), -1);
        assert!(c.pi_character(&PAdicScalar::zero(5)).is_err());
        assert_eq!(c.pi_total(&PAdicScalar::zero(5)), 0);
    }

    #[test]
    fn negative_integers_expand_canonically() {
        // -1 = (p-1) + (p-1)p + ... ; leading digit p-1
        let x = PAdicScalar::from_integer(7, -1, 6);
        assert_eq!(x.ord(), Some(0));
        assert_eq!(x.leading_digit(), Some(6));
        assert_eq!(x.digits(), &[6, 6, 6, 6, 6, 6]);
        assert!(x.add(&PAdicScalar::from_integer(7, 1, 6)).is_zero());
    }

    proptest! {
        #[test]
        fn ultrametric_triple(p in prop::sample::select(vec![3u32, 5, 7]),
                              a in -2000i64..2000, b in -2000i64..2000, c in -2000i64..2000) {
            let k = 12;
            let x = PAdicScalar::from_integer(p, a, k);
            let y = PAdicScalar::from_integer(p, b, k);
            let z = PAdicScalar::from_integer(p, c, k);
            let d = |u: &PAdicScalar, w: &PAdicScalar| u.sub(w).norm();
            prop_assert!(d(&x, &y) <= d(&x, &z).max(d(&z, &y)));
        }

        #[test]
        fn sharp_ultrametric(p in prop::sample::select(vec![3u32, 5, 7]),
                             a in 1i64..3000, b in 1i64..3000) {
            let k = 12;
            let x = PAdicScalar::from_integer(p, a, k);
            let y = PAdicScalar::from_integer(p, b, k);
            prop_assume!(x.norm() != y.norm());
            prop_assert_eq!(x.add(&y).norm(), x.norm().max(y.norm()));
        }

        #[test]
        fn chi_is_multiplicative(p in prop::sample::select(vec![3u32, 5, 7]),
                                 an in -300i64..300, ak in 0u32..4,
                                 bn in -300i64..300, bk in 0u32..4) {
            let k = 14;
            let x = PAdicScalar::from_fraction(p, an, ak, k);
            let y = PAdicScalar::from_fraction(p, bn, bk, k);
            prop_assert_eq!(x.chi().mul(&y.chi()), x.add(&y).chi());
        }

        #[test]
        fn pi_is_multiplicative_on_units(p in prop::sample::select(vec![3u32, 5, 7]),
                                         a in 1i64..5000, b in 1i64..5000) {
            let c = PrimeContext::new(p).unwrap();
            prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
            let k = 12;
            let u = PAdicScalar::from_integer(p, a, k);
            let v = PAdicScalar::from_integer(p, b, k);
            let lhs = c.pi_character(&u.mul(&v)).unwrap();
            prop_assert_eq!(lhs, c.pi_character(&u).unwrap() * c.pi_character(&v).unwrap());
        }
    }
}
