//! Binary forms in `u, v` and their Sylvester resultant.
//!
//! A form of degree `e` is stored as `e + 1` coefficients, `coeffs[j]`
//! multiplying `u^j v^(e-j)`. Setting `v = 1, u = t` identifies it with a
//! polynomial of degree at most `e` in `t`.
//!
//! Resultant sign convention: the Sylvester matrix has the `deg g` shifted
//! rows of `f` first, then the `deg f` rows of `g`; each row lists
//! coefficients by descending power of `u`. With this convention
//! `Res(u, v) = 1`.

use crate::error::{Error, Result};
use crate::field::{Fe, Fq};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Fe>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Fe>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a binary form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { coeffs: vec![Fe::ZERO; degree + 1] }
    }

    /// Homogenize `p(t)` to degree `degree` (`deg p <= degree` required).
    pub fn from_poly(p: &Poly, degree: usize) -> Result<Self> {
        if p.degree().is_some_and(|d| d > degree) {
            return Err(Error::Domain(format!("polynomial of degree {:?} exceeds {degree}", p.degree())));
        }
        Ok(BinaryForm { coeffs: (0..=degree).map(|j| p.coeff(j)).collect() })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Value at the point `(u : v) = (1 : 0)`.
    pub fn at_infinity(&self) -> Fe {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, u: Fe, v: Fe, field: &Fq) -> Fe {
        let e = self.degree() as u64;
        let mut acc = Fe::ZERO;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = field.mul(c, field.mul(field.pow(u, j as u64), field.pow(v, e - j as u64)));
            acc = field.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &BinaryForm, field: &Fq) -> Result<BinaryForm> {
        if self.degree() != other.degree() {
            return Err(Error::Domain("adding forms of different degrees".into()));
        }
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.add(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: Fe, field: &Fq) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|&a| field.mul(c, a)).collect() }
    }
}

/// Determinant over `F_q` by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Fe>>, field: &Fq) -> Fe {
    let n = m.len();
    let mut det = Fe::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != col {
            m.swap(piv, col);
            det = field.neg(det);
        }
        let pv = m[col][col];
        det = field.mul(det, pv);
        let inv = field.inv(pv).expect("pivot nonzero");
        for r in col + 1..n {
            let factor = field.mul(m[r][col], inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = field.mul(factor, m[col][c]);
                m[r][c] = field.sub(m[r][c], sub);
            }
        }
    }
    det
}

/// The Sylvester matrix of `f` (degree `m`) and `g` (degree `k`), f-rows first.
pub fn sylvester_matrix(f: &BinaryForm, g: &BinaryForm) -> Vec<Vec<Fe>> {
    let m = f.degree();
    let k = g.degree();
    let size = m + k;
    let desc = |b: &BinaryForm| -> Vec<Fe> { b.coeffs.iter().rev().copied().collect() };
    let fd = desc(f);
    let gd = desc(g);
    let mut rows = Vec::with_capacity(size);
    for shift in 0..k {
        let mut row = vec![Fe::ZERO; size];
        row[shift..shift + m + 1].copy_from_slice(&fd);
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Fe::ZERO; size];
        row[shift..shift + k + 1].copy_from_slice(&gd);
        rows.push(row);
    }
    rows
}

/// Sylvester determinant with no degeneracy checks (zero forms give zero
/// unless the matrix is empty).
pub fn sylvester_det(f: &BinaryForm, g: &BinaryForm, field: &Fq) -> Fe {
    determinant(sylvester_matrix(f, g), field)
}

/// Resultant of two nonzero binary forms. It vanishes exactly when the forms
/// share a zero in `P^1` over the algebraic closure.
pub fn resultant(f: &BinaryForm, g: &BinaryForm, field: &Fq) -> Result<Fe> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Domain("resultant of a zero form: degree is not well defined".into()));
    }
    Ok(sylvester_det(f, g, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_gcd;

    fn form(field: &Fq, c: &[i64]) -> BinaryForm {
        BinaryForm::new(c.iter().map(|&x| field.from_int(x)).collect()).unwrap()
    }

    #[test]
    fn resultant_examples() {
        let f5 = Fq::prime(5).unwrap();
        let u = form(&f5, &[0, 1]);
        let v = form(&f5, &[1, 0]);
        assert_eq!(resultant(&u, &v, &f5).unwrap(), Fe::ONE);
        // u*v and u*(u+v)
        let uv = form(&f5, &[0, 1, 0]);
        let u_uv = form(&f5, &[0, 1, 1]);
        assert_eq!(resultant(&uv, &u_uv, &f5).unwrap(), Fe::ZERO);
        assert!(resultant(&BinaryForm::zero(2), &uv, &f5).is_err());
    }

    /// Common projective zero iff the dehomogenized gcd is nonconstant, or
    /// both forms vanish at (1:0). Exhaustive over q in {3,5}, degrees <= 3.
    #[test]
    fn resultant_matches_gcd_criterion_exhaustively() {
        for p in [3u32, 5] {
            let field = Fq::prime(p).unwrap();
            let max_deg = if p == 3 { 3 } else { 2 };
            for m in 1..=max_deg {
                for k in 1..=max_deg {
                    let nf = (p as u64).pow(m as u32 + 1);
                    let ng = (p as u64).pow(k as u32 + 1);
                    for i in 1..nf {
                        let f = BinaryForm::from_poly(&Poly::from_index(&field, i, m + 1), m).unwrap();
                        for j in 1..ng {
                            let g = BinaryForm::from_poly(&Poly::from_index(&field, j, k + 1), k).unwrap();
                            let res = resultant(&f, &g, &field).unwrap();
                            let gcd = poly_gcd(&f.dehomogenize(), &g.dehomogenize(), &field).unwrap();
                            let common = gcd.degree().unwrap() >= 1
                                || (f.at_infinity().is_zero() && g.at_infinity().is_zero());
                            assert_eq!(res.is_zero(), common, "f={f:?} g={g:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_of_permutation_and_triangular() {
        let f7 = Fq::prime(7).unwrap();
        let m = vec![vec![Fe(0), Fe(1)], vec![Fe(1), Fe(0)]];
        assert_eq!(determinant(m, &f7), f7.from_int(-1));
        let t = vec![
            vec![Fe(2), Fe(5), Fe(1)],
            vec![Fe(0), Fe(3), Fe(4)],
            vec![Fe(0), Fe(0), Fe(6)],
        ];
        assert_eq!(determinant(t, &f7), f7.from_int(36));
    }

    #[test]
    fn eval_matches_dehomogenized() {
        let f5 = Fq::prime(5).unwrap();
        let b = form(&f5, &[1, 2, 3]);
        for x in f5.elements() {
            assert_eq!(b.eval(x, Fe::ONE, &f5), b.dehomogenize().eval(x, &f5));
        }
        assert_eq!(b.eval(Fe::ONE, Fe::ZERO, &f5), b.at_infinity());
    }
}
