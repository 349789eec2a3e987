//! The completion `K_inf = F_q((1/t))` with explicit precision windows.
//!
//! A [`LaurentElement`] is either *exact* (a finite Laurent polynomial, all
//! omitted coefficients are zero) or *windowed*: coefficients below its
//! `floor` are unknown. Reading below the floor is a hard
//! [`Error::Precision`], never a silent zero.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cyclo::{char_e_q, CyclotomicValue};
use crate::error::{Error, Result};
use crate::field::{Fe, Fq};
use crate::poly::Poly;

/// An absolute value `q^k`, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    Pow(i64),
}

impl Magnitude {
    pub fn exponent(self) -> Option<i64> {
        match self {
            Magnitude::Zero => None,
            Magnitude::Pow(k) => Some(k),
        }
    }

    pub fn to_rational(self, q: u32) -> BigRational {
        match self {
            Magnitude::Zero => BigRational::from_integer(BigInt::from(0)),
            Magnitude::Pow(k) => q_pow(q, k),
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Magnitude::Zero, Magnitude::Zero) => Ordering::Equal,
            (Magnitude::Zero, _) => Ordering::Less,
            (_, Magnitude::Zero) => Ordering::Greater,
            (Magnitude::Pow(a), Magnitude::Pow(b)) => a.cmp(b),
        }
    }
}

/// `q^k` as an exact rational, any sign of `k`.
pub fn q_pow(q: u32, k: i64) -> BigRational {
    let base = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    /// exponent of `coeffs[0]`
    start: i64,
    coeffs: Vec<Fe>,
    floor: Option<i64>,
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*t^{}", c, self.start + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.floor {
            Some(fl) => write!(f, " + O(t^{})", fl - 1),
            None => Ok(()),
        }
    }
}

impl LaurentElement {
    fn normalized(mut start: i64, mut coeffs: Vec<Fe>, floor: Option<i64>) -> Self {
        if let Some(fl) = floor {
            if start < fl {
                let drop = ((fl - start) as usize).min(coeffs.len());
                coeffs.drain(..drop);
                start = fl;
            }
        }
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        start += lead as i64;
        if coeffs.is_empty() {
            start = 0;
        }
        LaurentElement { start, coeffs, floor }
    }

    /// The certified zero.
    pub fn zero() -> Self {
        LaurentElement { start: 0, coeffs: Vec::new(), floor: None }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::normalized(0, p.coeffs().to_vec(), None)
    }

    /// `c t^k`, exact.
    pub fn monomial(c: Fe, k: i64) -> Self {
        Self::normalized(k, vec![c], None)
    }

    /// Exact element from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, Fe)], field: &Fq) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Fe::ZERO; (hi - lo + 1) as usize];
        for &(k, c) in terms {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = field.add(*slot, c);
        }
        Self::normalized(lo, coeffs, None)
    }

    /// Exact element in `T` with coefficient `coeffs[i]` at exponent `-(i+1)`.
    pub fn from_negative_coeffs(coeffs: &[Fe]) -> Self {
        let mut v = coeffs.to_vec();
        v.reverse();
        Self::normalized(-(coeffs.len() as i64), v, None)
    }

    /// Declare everything below `floor` unknown (keeps the tighter window).
    pub fn with_floor(&self, floor: i64) -> Self {
        let fl = match self.floor {
            Some(f) => f.max(floor),
            None => floor,
        };
        Self::normalized(self.start, self.coeffs.clone(), Some(fl))
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Highest exponent with a nonzero known coefficient.
    pub fn top(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    fn need(&self, k: i64) -> Result<()> {
        match self.floor {
            Some(fl) if k < fl => Err(Error::Precision { needed: k, floor: fl }),
            _ => Ok(()),
        }
    }

    pub fn coeff(&self, k: i64) -> Result<Fe> {
        self.need(k)?;
        Ok(self.raw(k))
    }

    fn raw(&self, k: i64) -> Fe {
        if k < self.start {
            return Fe::ZERO;
        }
        self.coeffs.get((k - self.start) as usize).copied().unwrap_or(Fe::ZERO)
    }

    /// `ord x`, with `None` for a certified zero.
    pub fn ord(&self) -> Result<Option<i64>> {
        match (self.top(), self.floor) {
            (Some(t), _) => Ok(Some(t)),
            (None, None) => Ok(None),
            (None, Some(fl)) => Err(Error::Precision { needed: fl - 1, floor: fl }),
        }
    }

    pub fn abs_value(&self) -> Result<Magnitude> {
        Ok(match self.ord()? {
            Some(k) => Magnitude::Pow(k),
            None => Magnitude::Zero,
        })
    }

    /// `||x|| = |sum_{i <= -1} x_i t^i|`.
    pub fn fractional_norm(&self) -> Result<Magnitude> {
        let hi = self.top().map_or(-1, |t| t.min(-1));
        let lo = self.floor.unwrap_or(self.start).min(self.start);
        let mut k = hi;
        while k >= lo {
            if !self.coeff(k)?.is_zero() {
                return Ok(Magnitude::Pow(k));
            }
            k -= 1;
        }
        match self.floor {
            None => Ok(Magnitude::Zero),
            Some(fl) => Err(Error::Precision { needed: fl - 1, floor: fl }),
        }
    }

    /// Decide `||x|| < q^(-m)`: all coefficients at exponents `-1 ..= -m` vanish.
    pub fn frac_norm_below(&self, m: i64) -> Result<bool> {
        if m <= 0 {
            return Ok(true);
        }
        self.need(-m)?;
        Ok((1..=m).all(|j| self.raw(-j).is_zero()))
    }

    /// The additive character `psi(x) = e_q(x_{-1})`.
    pub fn psi(&self, field: &Fq) -> Result<CyclotomicValue> {
        Ok(char_e_q(field, self.coeff(-1)?))
    }

    /// The polynomial part (exponents `>= 0`); needs the window to reach 0.
    pub fn integral_part(&self) -> Result<Poly> {
        self.need(0)?;
        let top = self.top().unwrap_or(-1);
        Ok(Poly::new((0..=top.max(-1)).map(|k| self.raw(k)).collect()))
    }

    /// The part at negative exponents (keeps the window).
    pub fn fractional_part(&self) -> Self {
        let coeffs: Vec<Fe> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if self.start + i as i64 >= 0 { Fe::ZERO } else { c })
            .collect();
        Self::normalized(self.start, coeffs, self.floor)
    }

    /// Coefficients at exponents `-1, -2, ..., -depth`.
    pub fn negative_coeffs(&self, depth: usize) -> Result<Vec<Fe>> {
        (1..=depth as i64).map(|j| self.coeff(-j)).collect()
    }

    fn lowest_stored(&self) -> i64 {
        self.floor.unwrap_or(self.start).min(self.start)
    }

    pub fn add(&self, other: &Self, field: &Fq) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let lo = self.lowest_stored().min(other.lowest_stored());
        let hi = self.top().unwrap_or(lo).max(other.top().unwrap_or(lo));
        let coeffs = (lo..=hi).map(|k| field.add(self.raw(k), other.raw(k))).collect();
        Self::normalized(lo, coeffs, floor)
    }

    pub fn neg(&self, field: &Fq) -> Self {
        Self::normalized(self.start, self.coeffs.iter().map(|&c| field.neg(c)).collect(), self.floor)
    }

    pub fn sub(&self, other: &Self, field: &Fq) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: Fe, field: &Fq) -> Self {
        Self::normalized(self.start, self.coeffs.iter().map(|&x| field.mul(c, x)).collect(), self.floor)
    }

    /// Multiply by `t^k` (exact shift, window moves with it).
    pub fn shift(&self, k: i64) -> Self {
        Self::normalized(self.start + k, self.coeffs.clone(), self.floor.map(|f| f + k))
    }

    /// Product; a windowed factor with floor `f` against a factor whose
    /// highest exponent is `h` gives a result exact down to `f + h`.
    pub fn mul(&self, other: &Self, field: &Fq) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            _ => {
                let a = self.floor.map(|f| f + other.top().unwrap_or(i64::MIN / 4));
                let b = other.floor.map(|f| f + self.top().unwrap_or(i64::MIN / 4));
                match (a, b) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => unreachable!(),
                }
            }
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::normalized(0, Vec::new(), floor.map(|f| f.max(i64::MIN / 2)));
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Self::normalized(self.start + other.start, out, floor)
    }

    pub fn mul_poly(&self, p: &Poly, field: &Fq) -> Self {
        self.mul(&LaurentElement::from_poly(p), field)
    }

    /// Quotient `self / other`, computed down to `floor` (or as deep as the
    /// operands' windows certify, whichever is shallower).
    pub fn div(&self, other: &Self, floor: i64, field: &Fq) -> Result<Self> {
        let ob = other
            .ord()?
            .ok_or_else(|| Error::Domain("division by zero in K_inf".into()))?;
        let lead_inv = field.inv(other.raw(ob)).expect("leading coefficient nonzero");
        let top_a = match self.top() {
            Some(t) => t,
            None => {
                return match self.floor {
                    None => Ok(Self::zero()),
                    Some(fl) => Ok(Self::normalized(0, Vec::new(), Some(fl - ob))),
                }
            }
        };
        let top_c = top_a - ob;
        let mut lo = floor;
        if let Some(fa) = self.floor {
            lo = lo.max(fa - ob);
        }
        if let Some(fb) = other.floor {
            lo = lo.max(fb + top_a - 2 * ob);
        }
        if lo > top_c {
            return Ok(Self::normalized(0, Vec::new(), Some(lo)));
        }
        let span = (top_c - lo + 1) as usize;
        let mut rem: Vec<Fe> = (0..span).map(|i| self.raw(top_a - i as i64)).collect();
        let mut out = vec![Fe::ZERO; span];
        for i in 0..span {
            let c = field.mul(rem[i], lead_inv);
            out[i] = c;
            if c.is_zero() {
                continue;
            }
            for j in i..span {
                // exponent of rem[j] is top_a - j; other contributes ob - (j - i)
                let b = other.raw(ob - (j - i) as i64);
                rem[j] = field.sub(rem[j], field.mul(c, b));
            }
        }
        out.reverse();
        Ok(Self::normalized(lo, out, Some(lo)))
    }
}

/// Laurent expansion of `a / r` at the infinite place, exact down to `floor`.
pub fn expand_rational(a: &Poly, r: &Poly, floor: i64, field: &Fq) -> Result<LaurentElement> {
    if r.is_zero() {
        return Err(Error::Domain("expand_rational: zero denominator".into()));
    }
    let (quot, rem) = a.div_rem(r, field)?;
    if rem.is_zero() {
        return Ok(LaurentElement::from_poly(&quot));
    }
    LaurentElement::from_poly(a).div(&LaurentElement::from_poly(r), floor, field)
}

/// A ball `{theta : |theta - center| < q^(-radius_exp)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSpec {
    pub center: LaurentElement,
    pub radius_exp: i64,
}

impl BallSpec {
    pub fn new(center: LaurentElement, radius_exp: i64) -> Self {
        BallSpec { center, radius_exp }
    }

    pub fn contains(&self, x: &LaurentElement, field: &Fq) -> Result<bool> {
        let d = x.sub(&self.center, field);
        Ok(d.abs_value()? < Magnitude::Pow(-self.radius_exp))
    }
}

/// Haar measure `q^(-Y)` of a ball of radius exponent `Y`.
pub fn ball_measure(ball: &BallSpec, q: u32) -> BigRational {
    q_pow(q, -ball.radius_exp)
}
