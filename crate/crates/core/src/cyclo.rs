//! Exact arithmetic in the cyclotomic field `Q(zeta_p)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(p-2)`; the
//! relation `1 + zeta + ... + zeta^(p-1) = 0` is applied eagerly, so two
//! values are equal iff their coefficient vectors are equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Fe, Fq};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    p: u32,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Coefficient vector `[c_0,...,c_{p-2}]`, rationals written `num/den`.
impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl CyclotomicValue {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2, "cyclotomic field needs p >= 2");
        CyclotomicValue { p, coeffs: vec![BigRational::zero(); p as usize - 1] }
    }

    pub fn from_integer(p: u32, n: impl Into<BigInt>) -> Self {
        let mut v = Self::zero(p);
        v.coeffs[0] = BigRational::from_integer(n.into());
        v
    }

    pub fn from_rational(p: u32, r: BigRational) -> Self {
        let mut v = Self::zero(p);
        v.coeffs[0] = r;
        v
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, 1)
    }

    /// `zeta_p^k`
    pub fn zeta_pow(p: u32, k: u64) -> Self {
        let mut counts = vec![BigInt::zero(); p as usize];
        counts[(k % p as u64) as usize] = BigInt::one();
        Self::from_residue_ints(p, &counts)
    }

    /// `sum_k counts[k] * zeta^k` for `k in 0..p`.
    pub fn from_residue_ints(p: u32, counts: &[BigInt]) -> Self {
        assert_eq!(counts.len(), p as usize, "one count per residue");
        let last = &counts[p as usize - 1];
        CyclotomicValue {
            p,
            coeffs: counts[..p as usize - 1]
                .iter()
                .map(|c| BigRational::from_integer(c - last))
                .collect(),
        }
    }

    pub fn from_residue_counts(p: u32, counts: &[u64]) -> Self {
        let big: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_residue_ints(p, &big)
    }

    /// Parse the `Display` form back.
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Domain(format!("bad cyclotomic literal {s:?}")))?;
        let coeffs: Vec<BigRational> = inner
            .split(',')
            .map(|c| parse_rational(c.trim()))
            .collect::<Result<_>>()?;
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Domain(format!("expected {} coefficients, got {}", p - 1, coeffs.len())));
        }
        Ok(CyclotomicValue { p, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational number when it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing cyclotomic fields of different p");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        CyclotomicValue {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicValue { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicValue { p: self.p, coeffs: self.coeffs.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Self::reduce(self.p, full)
    }

    fn reduce(p: u32, mut full: Vec<BigRational>) -> Self {
        let last = full.pop().expect("p >= 2");
        CyclotomicValue { p, coeffs: full.into_iter().map(|c| c - &last).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Complex conjugation `zeta^k -> zeta^(p-k)`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (k, c) in self.coeffs.iter().enumerate() {
            full[(p - k) % p] += c;
        }
        Self::reduce(self.p, full)
    }

    /// `|x|^2 = x * conj(x)`, a totally real element.
    pub fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Floating-point image under `zeta -> exp(2 pi i / p)`; reporting only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.p as f64;
            let cf = rational_to_f64(c);
            re += cf * ang.cos();
            im += cf * ang.sin();
        }
        (re, im)
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex_f64();
        re.hypot(im)
    }

    /// Exact sign of a real element under the standard embedding.
    ///
    /// Zero is detected algebraically; otherwise the value is evaluated in
    /// fixed point with a certified error bound, doubling the precision
    /// until the enclosure excludes zero.
    pub fn real_sign(&self) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::Domain("real_sign of a non-real cyclotomic value".into()));
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        // Clear denominators: value * den = sum C_k cos(2 pi k / p).
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let weight: BigInt = ints.iter().map(|c| c.abs()).sum();
        let mut bits = 128u64;
        loop {
            let cos = cos_table(self.p, bits);
            let approx: BigInt = ints.iter().zip(&cos).map(|(c, v)| c * v).sum();
            // each cosine is within COS_ERR_ULPS ulps of the truth
            let err = &weight * BigInt::from(COS_ERR_ULPS) + 1;
            if approx.abs() > err {
                return Ok(if approx.sign() == Sign::Minus { Ordering::Less } else { Ordering::Greater });
            }
            bits *= 2;
            if bits > 1 << 20 {
                return Err(Error::Domain("sign refinement did not terminate".into()));
            }
        }
    }
}

/// Result of comparing a cyclotomic magnitude against a rational bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagCmp {
    AtMost,
    Greater,
}

/// Decide `|x|^exponent <= bound` exactly.
///
/// Even exponents compare `(x conj x)^(exponent/2)` with `bound` in the real
/// subfield. Odd exponents are squared first (both sides are non-negative
/// whenever the bound is).
pub fn cyclo_mag_compare(x: &CyclotomicValue, bound: &BigRational, exponent: u32) -> Result<MagCmp> {
    if exponent == 0 {
        return Err(Error::Domain("exponent must be positive".into()));
    }
    if bound.is_negative() {
        return Ok(MagCmp::Greater);
    }
    let (exp, bound) = if exponent % 2 == 1 {
        (exponent * 2, bound * bound)
    } else {
        (exponent, bound.clone())
    };
    let lhs = x.norm_sq().pow(exp / 2);
    let diff = CyclotomicValue::from_rational(x.p(), bound).sub(&lhs);
    Ok(match diff.real_sign()? {
        Ordering::Less => MagCmp::Greater,
        _ => MagCmp::AtMost,
    })
}

/// The additive character `e_q(a) = zeta_p^tr(a)`.
pub fn char_e_q(field: &Fq, a: Fe) -> CyclotomicValue {
    CyclotomicValue::zeta_pow(field.p(), field.trace(a) as u64)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

// Fixed-point evaluation of cos(2 pi k / p). Values are scaled by 2^(bits+GUARD);
// the comparison scale is the same, and every table entry is within
// COS_ERR_ULPS of the exact value at that scale. The accumulated rounding of
// the series (a few thousand ulps at most for the sizes used) stays far below
// this bound.
const GUARD: u64 = 32;
const COS_ERR_ULPS: u64 = 1 << 20;

fn atan_inv(n: u64, one: &BigInt) -> BigInt {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut term = one / &n;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &n2;
        k += 1;
    }
    sum
}

fn cos_table(p: u32, bits: u64) -> Vec<BigInt> {
    let w = bits + GUARD;
    let one = BigInt::one() << w;
    let pi = atan_inv(5, &one) * 16 - atan_inv(239, &one) * 4;
    (0..p - 1)
        .map(|k| {
            let x = (&pi * BigInt::from(2 * k as u64)) / BigInt::from(p);
            let x2 = (&x * &x) >> w;
            let mut term = one.clone();
            let mut sum = one.clone();
            let mut j = 1u64;
            loop {
                term = (&term * &x2) >> w;
                term /= BigInt::from((2 * j - 1) * (2 * j));
                if term.is_zero() {
                    break;
                }
                if j % 2 == 1 {
                    sum -= &term;
                } else {
                    sum += &term;
                }
                j += 1;
            }
            sum
        })
        .collect()
}
