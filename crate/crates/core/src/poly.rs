//! Univariate polynomials over `F_q` (elements of `O = F_q[t]`).

use crate::error::{Error, Result};
use crate::field::{Fe, Fq};

/// A polynomial in `t`, constant term first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fe::ONE] }
    }

    pub fn constant(c: Fe) -> Self {
        Poly::new(vec![c])
    }

    /// `t^k`
    pub fn monomial(c: Fe, k: usize) -> Self {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(field: &Fq, c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| field.from_int(x)).collect())
    }

    /// The polynomial whose `k`-th coefficient is the `k`-th base-`q`
    /// digit of `index`, for exactly `len` digits.
    pub fn from_index(field: &Fq, mut index: u64, len: usize) -> Self {
        let q = field.order() as u64;
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(Fe((index % q) as u32));
            index /= q;
        }
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn add(&self, other: &Poly, field: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| field.add(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Poly, field: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| field.sub(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn neg(&self, field: &Fq) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| field.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, field: &Fq) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| field.mul(c, x)).collect())
    }

    pub fn mul(&self, other: &Poly, field: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
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
        Poly::new(out)
    }

    pub fn pow(&self, e: u32, field: &Fq) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// Euclidean division `self = quot * divisor + rem`, `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly, field: &Fq) -> Result<(Poly, Poly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lc_inv = field.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = field.mul(rem[top], lc_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let k = top - dd + j;
                rem[k] = field.sub(rem[k], field.mul(c, dj));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, field: &Fq) -> Result<Poly> {
        Ok(self.div_rem(divisor, field)?.1)
    }

    pub fn monic(&self, field: &Fq) -> Poly {
        match field.inv(self.leading()) {
            Some(inv) => self.scale(inv, field),
            None => Poly::zero(),
        }
    }

    pub fn eval(&self, x: Fe, field: &Fq) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Coefficient-wise image under a field embedding.
    pub fn map(&self, emb: &[Fe]) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| emb[c.0 as usize]).collect())
    }
}

/// Monic greatest common divisor. Both-zero input is rejected.
pub fn poly_gcd(f: &Poly, g: &Poly, field: &Fq) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined".into()));
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b, field)?;
        a = b;
        b = r;
    }
    Ok(a.monic(field))
}

/// Monic gcd of a family of polynomials; `None` when all are zero.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a Poly>, field: &Fq) -> Option<Poly> {
    let mut acc: Option<Poly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(field),
            Some(g) => poly_gcd(&g, p, field).expect("one side nonzero"),
        });
        if acc.as_ref().is_some_and(|g| g.degree() == Some(0)) {
            break;
        }
    }
    acc
}

/// All monic polynomials of exact degree `deg`.
pub fn monic_of_degree(field: &Fq, deg: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = (field.order() as u64).pow(deg as u32);
    (0..count).map(move |idx| {
        let mut v = Poly::from_index(field, idx, deg).coeffs;
        v.resize(deg, Fe::ZERO);
        v.push(Fe::ONE);
        Poly::new(v)
    })
}

/// All polynomials of degree `< len` (including zero), in index order.
pub fn all_below_degree(field: &Fq, len: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = (field.order() as u64).pow(len as u32);
    (0..count).map(move |idx| Poly::from_index(field, idx, len))
}
