//! Point counts on the space of degree-`e` morphisms `P^1 -> X` over
//! `F_(q^ell)`.
//!
//! A tuple of binary forms `f_i(u, v) = sum_k x_(k,i) u^k v^(e-k)` is stored
//! as its coefficient vectors `x_0, ..., x_e in F^n`. `F(f) = 0` as a binary
//! form exactly when the polynomial `F(x_0 + x_1 t + ... + x_e t^e)` of
//! degree `<= de` vanishes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::audit::dims;
use crate::circle::CountingProblem;
use crate::error::{pow_saturating, Budget, Error, Result};
use crate::field::{Fe, Fq};
use crate::forms::HypersurfaceForm;
use crate::kinfty::q_pow;
use crate::linalg::rref;
use crate::poly::{gcd_many, Poly};

/// The base problem lifted to `F_(q^ell)`.
#[derive(Debug, Clone)]
pub struct Lifted {
    pub ell: u32,
    pub field: Fq,
    pub form: HypersurfaceForm,
    pub e: usize,
}

/// Lift to the degree-`ell` extension; `modulus` fixes the big field's
/// modulus over `F_p` (default: the lexicographically first irreducible).
pub fn lift(prob: &CountingProblem, ell: u32, modulus: Option<Vec<u32>>) -> Result<Lifted> {
    let (field, emb) = prob.field().extension(ell, modulus)?;
    let form = prob.form().map_field(&emb, &field)?;
    Ok(Lifted { ell, field, form, e: prob.e() })
}

fn vectors(field: &Fq, n: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let q = field.order() as u64;
    (0..q.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let c = Fe((idx % q) as u32);
                idx /= q;
                c
            })
            .collect()
    })
}

/// All `x in F^n` with `F(x) = 0`, including `0`.
pub fn cone_points(field: &Fq, form: &HypersurfaceForm, budget: Budget) -> Result<Vec<Vec<Fe>>> {
    budget.check(pow_saturating(field.order() as u64, form.n() as u64))?;
    let mut out = Vec::new();
    for x in vectors(field, form.n()) {
        if form.eval(&x, field)?.is_zero() {
            out.push(x);
        }
    }
    Ok(out)
}

fn tuple_polys(tuple: &[Vec<Fe>], n: usize) -> Vec<Poly> {
    (0..n).map(|i| Poly::new(tuple.iter().map(|x| x[i]).collect())).collect()
}

/// Whether `F(x_0 + x_1 t + ... + x_e t^e)` is the zero polynomial.
fn composes_to_zero(field: &Fq, form: &HypersurfaceForm, tuple: &[Vec<Fe>], points: Option<&[Fe]>) -> Result<bool> {
    let n = form.n();
    match points {
        Some(ts) => {
            let mut y = vec![Fe::ZERO; n];
            for &t in ts {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = tuple.iter().rev().fold(Fe::ZERO, |acc, x| field.add(field.mul(acc, t), x[i]));
                }
                if !form.eval(&y, field)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        None => Ok(form.eval(&tuple_polys(tuple, n), field)?.is_zero()),
    }
}

/// `#{nonzero solutions}`, `#{coprime solutions}` and the number of tuples
/// the enumerator examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TupleCounts {
    pub nonzero: u128,
    pub coprime: u128,
    pub examined: u128,
}

/// No common projective zero: the top coefficients are not all zero (else
/// `v` divides every form) and the dehomogenized polynomials are coprime.
pub fn is_coprime(tuple: &[Vec<Fe>], field: &Fq) -> Result<bool> {
    let n = tuple[0].len();
    if tuple.last().unwrap().iter().all(|c| c.is_zero()) {
        return Ok(false);
    }
    let polys = tuple_polys(tuple, n);
    let g = gcd_many(polys.iter(), field).ok_or_else(|| Error::Domain("gcd of an all-zero tuple".into()))?;
    Ok(g.degree() == Some(0))
}

fn tally(field: &Fq, tuple: &[Vec<Fe>], acc: &mut TupleCounts) -> Result<()> {
    if tuple.iter().all(|x| x.iter().all(|c| c.is_zero())) {
        return Ok(());
    }
    acc.nonzero += 1;
    acc.coprime += is_coprime(tuple, field)? as u128;
    Ok(())
}

/// Pruned enumeration: `x_0 = f(0)` and `x_e` (the values at `t = 0, inf`)
/// must lie on the cone, so only cone pairs are combined with free middle
/// coefficients. Each candidate is then tested at `de - 1` nonzero points,
/// which decides a polynomial of degree `<= de` already vanishing at `0` and
/// `inf`. With too few field elements the full composition is expanded.
pub fn count_tuples(field: &Fq, form: &HypersurfaceForm, e: usize, budget: Budget) -> Result<TupleCounts> {
    let n = form.n();
    let q = field.order() as u64;
    let cone = cone_points(field, form, budget)?;
    let middle = pow_saturating(q, (n * (e - 1)) as u64);
    let work = (cone.len() as u128).saturating_mul(cone.len() as u128).saturating_mul(middle);
    budget.check(work)?;
    let need = form.d() * e - 1;
    let points: Option<Vec<Fe>> = (q as usize > need).then(|| field.nonzero().take(need).collect());
    let middles: Vec<Vec<Fe>> = vectors(field, n * (e - 1)).collect();
    let mut out = cone
        .par_iter()
        .map(|x0| -> Result<TupleCounts> {
            let mut acc = TupleCounts::default();
            let mut tuple = vec![x0.clone(); e + 1];
            for xe in &cone {
                tuple[e].clone_from(xe);
                for mid in &middles {
                    for k in 1..e {
                        tuple[k].copy_from_slice(&mid[(k - 1) * n..k * n]);
                    }
                    acc.examined += 1;
                    if composes_to_zero(field, form, &tuple, points.as_deref())? {
                        tally(field, &tuple, &mut acc)?;
                    }
                }
            }
            Ok(acc)
        })
        .try_reduce(TupleCounts::default, |a, b| {
            Ok(TupleCounts { nonzero: a.nonzero + b.nonzero, coprime: a.coprime + b.coprime, examined: a.examined + b.examined })
        })?;
    out.examined += q.pow(n as u32) as u128;
    Ok(out)
}

/// Every tuple, every coefficient of the composition. The oracle for `count_tuples`.
pub fn count_tuples_brute(field: &Fq, form: &HypersurfaceForm, e: usize, budget: Budget) -> Result<TupleCounts> {
    let n = form.n();
    let q = field.order() as u64;
    let total = pow_saturating(q, (n * (e + 1)) as u64);
    budget.check(total)?;
    let mut acc = TupleCounts { examined: total, ..Default::default() };
    for flat in vectors(field, n * (e + 1)) {
        let tuple: Vec<Vec<Fe>> = flat.chunks(n).map(|c| c.to_vec()).collect();
        if composes_to_zero(field, form, &tuple, None)? {
            tally(field, &tuple, &mut acc)?;
        }
    }
    Ok(acc)
}

/// `#M_e` over `F_(q^ell)`: nonzero tuples with `F(f) = 0`, common factors allowed.
pub fn count_cone(lifted: &Lifted, budget: Budget) -> Result<u128> {
    Ok(count_tuples(&lifted.field, &lifted.form, lifted.e, budget)?.nonzero)
}

/// `#Mor_e(P^1, X)(F_(q^ell))`: coprime tuples up to scalars.
pub fn count_morphisms(lifted: &Lifted, budget: Budget) -> Result<u128> {
    morphisms_from(&tuple_counts_checked(lifted, budget)?, &lifted.field)
}

fn tuple_counts_checked(lifted: &Lifted, budget: Budget) -> Result<TupleCounts> {
    count_tuples(&lifted.field, &lifted.form, lifted.e, budget)
}

fn morphisms_from(counts: &TupleCounts, field: &Fq) -> Result<u128> {
    let units = field.order() as u128 - 1;
    if counts.coprime % units != 0 {
        return Err(Error::Domain(format!("{} coprime tuples is not a multiple of {units}", counts.coprime)));
    }
    Ok(counts.coprime / units)
}

/// Lines on `X`: 2-dimensional subspaces of `F^n` in reduced echelon form
/// on which `F` vanishes identically.
pub fn count_lines(field: &Fq, form: &HypersurfaceForm, budget: Budget) -> Result<u128> {
    let n = form.n();
    let d = form.d();
    let q = field.order() as u64;
    budget.check(pow_saturating(q, 2 * n as u64))?;
    // F restricted to span(a, b) is a binary form of degree d; it vanishes iff
    // it vanishes at d + 1 distinct projective points
    if (q as usize) < d {
        return Err(Error::Domain(format!("need q >= d = {d} to test lines pointwise")));
    }
    let probes: Vec<(Fe, Fe)> = std::iter::once((Fe::ONE, Fe::ZERO))
        .chain(field.elements().take(d).map(|c| (c, Fe::ONE)))
        .collect();
    let mut count = 0u128;
    for i in 0..n {
        for j in (i + 1)..n {
            // a: pivot i, free after i except j; b: pivot j, free after j
            let a_free: Vec<usize> = ((i + 1)..n).filter(|&k| k != j).collect();
            let b_free: Vec<usize> = ((j + 1)..n).collect();
            for av in vectors(field, a_free.len()) {
                let mut a = vec![Fe::ZERO; n];
                a[i] = Fe::ONE;
                for (&k, &c) in a_free.iter().zip(&av) {
                    a[k] = c;
                }
                for bv in vectors(field, b_free.len()) {
                    let mut b = vec![Fe::ZERO; n];
                    b[j] = Fe::ONE;
                    for (&k, &c) in b_free.iter().zip(&bv) {
                        b[k] = c;
                    }
                    let mut on = true;
                    for &(s, t) in &probes {
                        let x: Vec<Fe> = a.iter().zip(&b).map(|(&ak, &bk)| field.add(field.mul(s, ak), field.mul(t, bk))).collect();
                        if !form.eval(&x, field)?.is_zero() {
                            on = false;
                            break;
                        }
                    }
                    count += on as u128;
                }
            }
        }
    }
    Ok(count)
}

/// `#PGL_2(F_Q) = Q^3 - Q`.
pub fn pgl2_order(q: u128) -> u128 {
    q * q * q - q
}

/// Homogeneous resultant of two binary forms of formal degree `e`
/// (coefficients listed from `u^0 v^e` upward), via the Sylvester matrix.
pub fn binary_resultant(f: &[Fe], g: &[Fe], field: &Fq) -> Fe {
    let e = f.len() - 1;
    let size = 2 * e;
    if size == 0 {
        return Fe::ONE;
    }
    let mut rows = Vec::with_capacity(size);
    for (src, shifts) in [(f, e), (g, e)] {
        for s in 0..shifts {
            let mut row = vec![Fe::ZERO; size];
            for (k, &c) in src.iter().enumerate() {
                row[s + k] = c;
            }
            rows.push(row);
        }
    }
    determinant_fq(rows, field)
}

fn determinant_fq(mut rows: Vec<Vec<Fe>>, field: &Fq) -> Fe {
    let n = rows.len();
    let mut det = Fe::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != col {
            rows.swap(piv, col);
            det = field.neg(det);
        }
        let p = rows[col][col];
        det = field.mul(det, p);
        let inv = field.inv(p).expect("pivot nonzero");
        for r in (col + 1)..n {
            let f = field.mul(rows[r][col], inv);
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = field.mul(f, rows[col][c]);
                rows[r][c] = field.sub(rows[r][c], sub);
            }
        }
    }
    det
}

/// The resultant criterion: the forms have a common zero iff
/// `Res(sum lambda_i f_i, sum mu_i f_i)` vanishes identically in `(lambda, mu)`.
/// The resultant has degree `<= e` in each variable, so it vanishes
/// identically iff it vanishes on the grid `{0, ..., e}^(2n)`.
pub fn coprime_by_resultant(tuple: &[Vec<Fe>], field: &Fq) -> Result<bool> {
    let n = tuple[0].len();
    let e = tuple.len() - 1;
    if (field.order() as usize) <= e {
        return Err(Error::Domain(format!("need q > e = {e} for the resultant grid")));
    }
    let grid: Vec<Fe> = field.elements().take(e + 1).collect();
    let side = (e + 1) as u64;
    for idx in 0..side.pow(2 * n as u32) {
        let mut rest = idx;
        let mut coords = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            coords.push(grid[(rest % side) as usize]);
            rest /= side;
        }
        let combo = |w: &[Fe]| -> Vec<Fe> {
            tuple.iter().map(|x| field.sum(x.iter().zip(w).map(|(&c, &l)| field.mul(c, l)))).collect()
        };
        let f = combo(&coords[..n]);
        let g = combo(&coords[n..]);
        if !binary_resultant(&f, &g, field).is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One row of the Lang-Weil table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub ell: u32,
    pub field_order: u32,
    pub raw_cone: u128,
    pub coprime_tuples: u128,
    pub morphisms: u128,
    pub mu_hat: i64,
    pub mu: i64,
    /// `raw_cone / q^(ell mu_hat)`
    pub ratio_mu_hat: BigRational,
    /// `morphisms / q^(ell mu)`
    pub ratio_mu: BigRational,
    pub examined: u128,
}

pub fn langweil_report(prob: &CountingProblem, ell_max: u32, moduli: &[Option<Vec<u32>>], budget: Budget) -> Result<Vec<CountReport>> {
    let dm = dims(prob.n() as i64, prob.d() as i64, prob.e() as i64);
    (1..=ell_max)
        .map(|ell| {
            let modulus = moduli.get(ell as usize - 1).cloned().flatten();
            let lifted = lift(prob, ell, modulus)?;
            let counts = tuple_counts_checked(&lifted, budget)?;
            let morphisms = morphisms_from(&counts, &lifted.field)?;
            let qe = |k: i64| q_pow(prob.q(), k * ell as i64);
            let int = |x: u128| BigRational::from_integer(BigInt::from(x));
            Ok(CountReport {
                ell,
                field_order: lifted.field.order(),
                raw_cone: counts.nonzero,
                coprime_tuples: counts.coprime,
                morphisms,
                mu_hat: dm.mu_hat,
                mu: dm.mu_affine,
                ratio_mu_hat: int(counts.nonzero) / qe(dm.mu_hat),
                ratio_mu: int(morphisms) / qe(dm.mu_affine),
                examined: counts.examined,
            })
        })
        .collect()
}

/// Rank of the `F_q`-span of a tuple's coefficient vectors, i.e. the
/// dimension of the linear span of the forms (a diagnostic for degenerate tuples).
pub fn span_rank(tuple: &[Vec<Fe>], field: &Fq) -> usize {
    let n = tuple[0].len();
    let mut rows: Vec<Vec<Fe>> = (0..n).map(|i| tuple.iter().map(|x| x[i]).collect()).collect();
    rref(&mut rows, tuple.len(), field).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::brute_count_np;
    use crate::forms::{fermat, Monomial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prob(p: u32, n: usize, e: usize) -> CountingProblem {
        let f = Fq::prime(p).unwrap();
        CountingProblem::new(f.clone(), fermat(n, 3, &f).unwrap(), e).unwrap()
    }

    #[test]
    fn cone_matches_box_count() {
        for (p, n, e) in [(5, 2, 1), (5, 3, 1), (7, 2, 1), (5, 2, 2), (7, 3, 1)] {
            let pr = prob(p, n, e);
            let lifted = lift(&pr, 1, None).unwrap();
            let cone = count_cone(&lifted, Budget::default()).unwrap();
            assert_eq!(cone + 1, brute_count_np(&pr, Budget::default()).unwrap() as u128);
            assert_eq!(cone % (p as u128 - 1), 0);
        }
        let lifted = lift(&prob(5, 2, 1), 1, None).unwrap();
        assert_eq!(count_cone(&lifted, Budget::default()).unwrap(), 24);
    }

    #[test]
    fn pruned_matches_brute_force() {
        for (p, n, e) in [(5, 2, 1), (5, 3, 1), (5, 2, 2), (7, 2, 2), (5, 4, 1)] {
            let pr = prob(p, n, e);
            let fast = count_tuples(pr.field(), pr.form(), e, Budget::default()).unwrap();
            let slow = count_tuples_brute(pr.field(), pr.form(), e, Budget::default()).unwrap();
            assert_eq!((fast.nonzero, fast.coprime), (slow.nonzero, slow.coprime), "p={p} n={n} e={e}");
        }
    }

    #[test]
    fn fermat_surface_lines_over_f5() {
        let pr = prob(5, 4, 1);
        let lifted = lift(&pr, 1, None).unwrap();
        let lines = count_lines(&lifted.field, &lifted.form, Budget::default()).unwrap();
        assert_eq!(lines, 3);
        assert_eq!(count_morphisms(&lifted, Budget::default()).unwrap(), lines * pgl2_order(5));
        assert_eq!(count_morphisms(&lifted, Budget::default()).unwrap(), 360);
    }

    #[test]
    fn no_morphisms_from_anisotropic_conic_like_form() {
        // x^3 + 2 y^3 over F_7: no nonzero F_7 points, hence no curves at all
        let f = Fq::prime(7).unwrap();
        let form = HypersurfaceForm::symmetrize(
            &[Monomial { exps: vec![3, 0], coeff: Fe(1) }, Monomial { exps: vec![0, 3], coeff: Fe(2) }],
            2,
            3,
            &f,
        )
        .unwrap();
        let pr = CountingProblem::new(f, form, 1).unwrap();
        let lifted = lift(&pr, 1, None).unwrap();
        assert_eq!(count_morphisms(&lifted, Budget::default()).unwrap(), 0);
        assert_eq!(count_cone(&lifted, Budget::default()).unwrap(), 0);
    }

    #[test]
    fn gcd_and_resultant_agree() {
        let f = Fq::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for e in 1..=2 {
            for _ in 0..150 {
                let n = rng.gen_range(2..=3);
                let mut tuple: Vec<Vec<Fe>> = (0..=e).map(|_| (0..n).map(|_| Fe(rng.gen_range(0..5))).collect()).collect();
                if rng.gen_bool(0.3) {
                    // force a shared root at t = 1 in the first two forms
                    for i in 0..2 {
                        let s = f.sum((1..=e).map(|k| tuple[k][i]));
                        tuple[0][i] = f.neg(s);
                    }
                }
                if tuple.iter().all(|x| x.iter().all(|c| c.is_zero())) {
                    continue;
                }
                assert_eq!(is_coprime(&tuple, &f).unwrap(), coprime_by_resultant(&tuple, &f).unwrap(), "{tuple:?}");
            }
        }
        // proportional forms share everything
        let t = vec![vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]];
        assert!(!is_coprime(&t, &f).unwrap());
        assert_eq!(span_rank(&t, &f), 1);
    }

    #[test]
    fn report_rows() {
        let pr = prob(5, 4, 1);
        let rows = langweil_report(&pr, 1, &[], Budget::default()).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.mu, 3);
        assert_eq!(r.morphisms, 360);
        assert_eq!(r.ratio_mu, BigRational::new(BigInt::from(360), BigInt::from(125)));
        assert_eq!(r.coprime_tuples, r.morphisms * 4);
        assert!(r.ratio_mu_hat > BigRational::from_integer(BigInt::from(0)));
    }
}
