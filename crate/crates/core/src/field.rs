//! Prime and prime-power finite fields with table arithmetic.
//!
//! An element of `F_q`, `q = p^f`, is stored as the integer whose base-`p`
//! digits are its coordinates in the power basis of the configured modulus.
//! All arithmetic goes through precomputed `q x q` tables, so fields are
//! capped at [`MAX_ORDER`] elements.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order accepted (tables are `q^2` entries).
pub const MAX_ORDER: u32 = 2048;

/// An element of a finite field, as an index into its field's tables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Field description as it appears in a run configuration.
///
/// `modulus` lists the coefficients of a monic degree-`f` polynomial over
/// `F_p`, constant term first. It is ignored (and may be absent) when `f = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub f: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, f: 1, modulus: None }
    }

    pub fn extension(p: u32, modulus: Vec<u32>) -> Self {
        let f = modulus.len().saturating_sub(1) as u32;
        FieldSpec { p, f, modulus: Some(modulus) }
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.f)
    }
}

/// A finite field `F_q` with full addition and multiplication tables.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, modulus={:?})", self.q, self.p, self.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Dense F_p polynomial helpers (constant term first), used only while
// building tables and testing moduli.
fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lc_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lc_inv % p;
        let shift = top - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * mj % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility over `F_p` of a monic polynomial: no factor of degree at
/// most `deg/2`, tested through `gcd(x^(p^i) - x, m)`.
pub fn is_irreducible_fp(modulus: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    let m: Vec<u64> = modulus.iter().map(|&c| c as u64 % p64).collect();
    let mut m = m;
    fp_trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    let mut xp = vec![0u64, 1u64];
    for _ in 1..=deg / 2 {
        // xp <- xp^p mod m
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p64;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_rem(&fp_mul(&acc, &base, p64), &m, p64);
            }
            base = fp_rem(&fp_mul(&base, &base, p64), &m, p64);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p64 - 1) % p64;
        fp_trim(&mut diff);
        let g = fp_gcd(&m, &diff, p64);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `f` over
/// `F_p` (lowest coefficients vary fastest).
pub fn first_irreducible(p: u32, f: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::Field(format!("{p} is not prime")));
    }
    let total = (p as u64).pow(f);
    for idx in 0..total {
        let mut m = Vec::with_capacity(f as usize + 1);
        let mut rest = idx;
        for _ in 0..f {
            m.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        m.push(1);
        if is_irreducible_fp(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::Field(format!("no irreducible of degree {f} over F_{p}")))
}

impl Fq {
    pub fn new(spec: &FieldSpec) -> Result<Fq> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if spec.f == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q64 = spec.order();
        if q64 > MAX_ORDER as u64 {
            return Err(Error::Field(format!("field order {q64} exceeds {MAX_ORDER}")));
        }
        let modulus = match (&spec.modulus, spec.f) {
            (_, 1) => vec![0, 1],
            (Some(m), f) => {
                if m.len() != f as usize + 1 || m[f as usize] != 1 {
                    return Err(Error::Field(format!(
                        "modulus must be monic of degree {f}, got {m:?}"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::Field(format!("modulus coefficients must lie in [0,{p})")));
                }
                if !is_irreducible_fp(m, p) {
                    return Err(Error::Field(format!("modulus {m:?} is reducible over F_{p}")));
                }
                m.clone()
            }
            (None, f) => {
                return Err(Error::Field(format!(
                    "extension of degree {f} requires an explicit modulus"
                )))
            }
        };
        Ok(Self::build(p, spec.f, modulus))
    }

    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(&FieldSpec::prime(p))
    }

    fn build(p: u32, f: u32, modulus: Vec<u32>) -> Fq {
        let q = p.pow(f);
        let qs = q as usize;
        let p64 = p as u64;
        let coords = |x: u32| -> Vec<u64> {
            let mut v = Vec::with_capacity(f as usize);
            let mut r = x;
            for _ in 0..f {
                v.push((r % p) as u64);
                r /= p;
            }
            v
        };
        let index = |v: &[u64]| -> u32 {
            let mut acc = 0u32;
            for &c in v.iter().rev() {
                acc = acc * p + c as u32;
            }
            acc
        };
        let m64: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let all: Vec<Vec<u64>> = (0..q).map(coords).collect();

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..qs {
            for b in a..qs {
                let s: Vec<u64> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p64).collect();
                let s = index(&s);
                add[a * qs + b] = s;
                add[b * qs + a] = s;
                let mut prod = fp_rem(&fp_mul(&all[a], &all[b], p64), &m64, p64);
                prod.resize(f as usize, 0);
                let pr = index(&prod);
                mul[a * qs + b] = pr;
                mul[b * qs + a] = pr;
            }
        }
        let mut neg = vec![0u32; qs];
        let mut inv = vec![0u32; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u32;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        let mut field = Fq { p, f, q, modulus, add, mul, neg, inv, trace: vec![0; qs] };
        for a in 0..q {
            let mut acc = Fe::ZERO;
            let mut x = Fe(a);
            for _ in 0..f {
                acc = field.add(acc, x);
                x = field.pow(x, p as u64);
            }
            debug_assert!(acc.0 < p, "trace must land in the prime field");
            field.trace[a as usize] = acc.0;
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            f: self.f,
            modulus: if self.f == 1 { None } else { Some(self.modulus.clone()) },
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            None
        } else {
            Some(Fe(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The absolute trace `tr_{F_q/F_p}`, returned as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, a: Fe) -> u32 {
        self.trace[a.0 as usize]
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.f as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Field(format!("bad power-basis coordinates {coords:?}")));
        }
        let mut acc = 0u32;
        for &c in coords.iter().rev() {
            acc = acc * self.p + c;
        }
        Ok(Fe(acc))
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.f as usize);
        let mut r = a.0;
        for _ in 0..self.f {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    /// The generator `x` of the power basis (a root of the modulus).
    pub fn generator(&self) -> Fe {
        if self.f == 1 {
            // any element works as the image of x mod (x - 0)
            Fe::ZERO
        } else {
            Fe(self.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    /// Sum of a slice of field elements.
    pub fn sum(&self, xs: impl IntoIterator<Item = Fe>) -> Fe {
        xs.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// A degree-`ell` extension of this field as a field over `F_p` of
    /// degree `f * ell`, together with the embedding of this field into it.
    ///
    /// `modulus` is the big field's modulus over `F_p`; when absent the
    /// lexicographically first irreducible polynomial is used.
    pub fn extension(&self, ell: u32, modulus: Option<Vec<u32>>) -> Result<(Fq, Vec<Fe>)> {
        if ell == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        if ell == 1 && modulus.is_none() {
            let emb = self.elements().collect();
            return Ok((self.clone(), emb));
        }
        let big_f = self.f * ell;
        let m = match modulus {
            Some(m) => m,
            None => {
                if big_f == 1 {
                    vec![0, 1]
                } else {
                    first_irreducible(self.p, big_f)?
                }
            }
        };
        let big = Fq::new(&FieldSpec { p: self.p, f: big_f, modulus: Some(m) }.normalized())?;
        let root = if self.f == 1 {
            Fe::ZERO
        } else {
            big.elements()
                .find(|&x| {
                    let mut acc = Fe::ZERO;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, x), big.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| Error::Field("base modulus has no root in the extension".into()))?
        };
        let emb = self
            .elements()
            .map(|a| {
                let c = self.coords(a);
                let mut acc = Fe::ZERO;
                for &ci in c.iter().rev() {
                    acc = big.add(big.mul(acc, root), big.from_int(ci as i64));
                }
                acc
            })
            .collect();
        Ok((big, emb))
    }
}

impl FieldSpec {
    fn normalized(self) -> FieldSpec {
        if self.f == 1 {
            FieldSpec { modulus: None, ..self }
        } else {
            self
        }
    }
}
