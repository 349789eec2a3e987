//! Degree-`d` forms in `n` variables as symmetric tensors, the multilinear
//! system `Psi_i`, and a bounded smoothness probe.

use std::collections::BTreeMap;

use crate::error::{pow_saturating, Budget, Error, Result};
use crate::field::{Fe, Fq};
use crate::poly::Poly;

/// Ring elements the form can be evaluated on.
pub trait Coeff: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self, field: &Fq) -> Self;
    fn mul(&self, other: &Self, field: &Fq) -> Self;
    fn scale(&self, c: Fe, field: &Fq) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for Fe {
    fn zero() -> Self {
        Fe::ZERO
    }
    fn one() -> Self {
        Fe::ONE
    }
    fn add(&self, other: &Self, field: &Fq) -> Self {
        field.add(*self, *other)
    }
    fn mul(&self, other: &Self, field: &Fq) -> Self {
        field.mul(*self, *other)
    }
    fn scale(&self, c: Fe, field: &Fq) -> Self {
        field.mul(c, *self)
    }
    fn is_zero(&self) -> bool {
        Fe::is_zero(*self)
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn add(&self, other: &Self, field: &Fq) -> Self {
        Poly::add(self, other, field)
    }
    fn mul(&self, other: &Self, field: &Fq) -> Self {
        Poly::mul(self, other, field)
    }
    fn scale(&self, c: Fe, field: &Fq) -> Self {
        Poly::scale(self, c, field)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

/// A nonzero-coefficient monomial `c * x^exps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: Fe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceForm {
    n: usize,
    d: usize,
    monomials: Vec<Monomial>,
    /// dense symmetric tensor, index `sum_k i_k n^k`
    dense: Vec<Fe>,
}

fn factorial_mod(k: u32, field: &Fq) -> Fe {
    (1..=k as i64).fold(Fe::ONE, |acc, j| field.mul(acc, field.from_int(j)))
}

impl HypersurfaceForm {
    /// Build the symmetric tensor of `sum c x^e`; like exponents are merged.
    pub fn symmetrize(monomials: &[Monomial], n: usize, d: usize, field: &Fq) -> Result<Self> {
        if d < 3 {
            return Err(Error::Domain(format!("form degree must be at least 3, got {d}")));
        }
        if n == 0 {
            return Err(Error::Domain("a form needs at least one variable".into()));
        }
        if field.p() as usize <= d {
            return Err(Error::Domain(format!(
                "characteristic {} must exceed the degree {d} to symmetrize",
                field.p()
            )));
        }
        let mut merged: BTreeMap<Vec<u32>, Fe> = BTreeMap::new();
        for m in monomials {
            if m.exps.len() != n {
                return Err(Error::Domain(format!("monomial {:?} has {} exponents, expected {n}", m.exps, m.exps.len())));
            }
            let deg: u32 = m.exps.iter().sum();
            if deg as usize != d {
                return Err(Error::Domain(format!("monomial {:?} has degree {deg}, expected {d}", m.exps)));
            }
            let slot = merged.entry(m.exps.clone()).or_insert(Fe::ZERO);
            *slot = field.add(*slot, m.coeff);
        }
        let monomials: Vec<Monomial> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { exps, coeff })
            .collect();

        let size = n.pow(d as u32);
        let mut dense = vec![Fe::ZERO; size];
        let d_fact = factorial_mod(d as u32, field);
        let d_fact_inv = field.inv(d_fact).expect("p > d");
        for idx in 0..size {
            let tuple = unflatten(idx, n, d);
            let mut exps = vec![0u32; n];
            for &i in &tuple {
                exps[i] += 1;
            }
            let Some(m) = monomials.iter().find(|m| m.exps == exps) else {
                continue;
            };
            // c / (d! / prod e_i!)
            let denom_fact = exps.iter().fold(Fe::ONE, |acc, &e| field.mul(acc, factorial_mod(e, field)));
            dense[idx] = field.mul(m.coeff, field.mul(denom_fact, d_fact_inv));
        }
        Ok(HypersurfaceForm { n, d, monomials, dense })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `c_{i_1 ... i_d}` (0-based indices, any order).
    pub fn tensor_entry(&self, idx: &[usize]) -> Result<Fe> {
        if idx.len() != self.d || idx.iter().any(|&i| i >= self.n) {
            return Err(Error::Domain(format!("bad tensor index {idx:?}")));
        }
        Ok(self.dense[flatten(idx, self.n)])
    }

    /// Tensor entries on sorted index representatives, zeros omitted.
    pub fn tensor_support(&self) -> Vec<(Vec<usize>, Fe)> {
        (0..self.dense.len())
            .filter_map(|k| {
                let t = unflatten(k, self.n, self.d);
                let sorted = t.windows(2).all(|w| w[0] <= w[1]);
                (sorted && !self.dense[k].is_zero()).then(|| (t, self.dense[k]))
            })
            .collect()
    }

    pub fn eval<T: Coeff>(&self, x: &[T], field: &Fq) -> Result<T> {
        self.check_len(x.len())?;
        let mut acc = T::zero();
        for m in &self.monomials {
            let mut term = T::one();
            for (xi, &e) in x.iter().zip(&m.exps) {
                for _ in 0..e {
                    term = term.mul(xi, field);
                }
            }
            acc = acc.add(&term.scale(m.coeff, field), field);
        }
        Ok(acc)
    }

    /// Evaluation through the tensor (ordered-tuple sum); a cross-check of `eval`.
    pub fn eval_tensor<T: Coeff>(&self, x: &[T], field: &Fq) -> Result<T> {
        self.check_len(x.len())?;
        let mut acc = T::zero();
        for (k, &c) in self.dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = T::one();
            for i in unflatten(k, self.n, self.d) {
                term = term.mul(&x[i], field);
            }
            acc = acc.add(&term.scale(c, field), field);
        }
        Ok(acc)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Domain(format!("vector of length {len}, form has {} variables", self.n)));
        }
        Ok(())
    }

    /// Contract the tensor against `d - 2` vectors: returns `A` with
    /// `Psi_i(prefix, w) = sum_j A[i][j] w_j`.
    pub fn contract<T: Coeff>(&self, prefix: &[&[T]], field: &Fq) -> Result<Vec<Vec<T>>> {
        if prefix.len() != self.d - 2 {
            return Err(Error::Domain(format!("expected {} prefix vectors, got {}", self.d - 2, prefix.len())));
        }
        for v in prefix {
            self.check_len(v.len())?;
        }
        let n = self.n;
        let mut a = vec![vec![T::zero(); n]; n];
        let outer = n.pow((self.d - 2) as u32);
        for k in 0..outer {
            let tuple = unflatten(k, n, self.d - 2);
            let mut w = T::one();
            for (slot, &i) in tuple.iter().enumerate() {
                w = w.mul(&prefix[slot][i], field);
                if w.is_zero() {
                    break;
                }
            }
            if w.is_zero() {
                continue;
            }
            let base = k;
            let stride = outer;
            for j in 0..n {
                for i in 0..n {
                    let c = self.dense[base + stride * (j + n * i)];
                    if !c.is_zero() {
                        a[i][j] = a[i][j].add(&w.scale(c, field), field);
                    }
                }
            }
        }
        Ok(a)
    }

    /// `Psi_i(u_1, ..., u_{d-1})` for 0-based `i`.
    pub fn eval_multilinear<T: Coeff>(&self, i: usize, args: &[&[T]], field: &Fq) -> Result<T> {
        if args.len() != self.d - 1 {
            return Err(Error::Domain(format!("Psi takes {} vectors, got {}", self.d - 1, args.len())));
        }
        if i >= self.n {
            return Err(Error::Domain(format!("Psi index {i} out of range")));
        }
        let last = args[self.d - 2];
        self.check_len(last.len())?;
        let a = self.contract(&args[..self.d - 2], field)?;
        Ok(a[i]
            .iter()
            .zip(last)
            .fold(T::zero(), |acc, (aij, wj)| acc.add(&aij.mul(wj, field), field)))
    }

    /// All `Psi_i(u_1, ..., u_{d-1})`.
    pub fn eval_multilinear_all<T: Coeff>(&self, args: &[&[T]], field: &Fq) -> Result<Vec<T>> {
        (0..self.n).map(|i| self.eval_multilinear(i, args, field)).collect()
    }

    /// The same form with coefficients pushed through a field embedding.
    pub fn map_field(&self, emb: &[Fe], target: &Fq) -> Result<Self> {
        let monos: Vec<Monomial> = self
            .monomials
            .iter()
            .map(|m| Monomial { exps: m.exps.clone(), coeff: emb[m.coeff.0 as usize] })
            .collect();
        HypersurfaceForm::symmetrize(&monos, self.n, self.d, target)
    }

    /// Search `x != 0` over `F_{q^k}`, `k <= k_max`, with `F(x) = 0` and
    /// `grad F(x) = 0`. Projective representatives only.
    pub fn smoothness_probe(&self, field: &Fq, k_max: u32, budget: Budget) -> Result<ProbeOutcome> {
        if k_max == 0 {
            return Err(Error::Domain("k_max must be at least 1".into()));
        }
        let mut total: u128 = 0;
        for k in 1..=k_max {
            total = total.saturating_add(pow_saturating(field.order() as u64, k as u64 * self.n as u64));
        }
        budget.check(total)?;
        for k in 1..=k_max {
            let (ext, emb) = field.extension(k, None)?;
            let form = self.map_field(&emb, &ext)?;
            let qk = ext.order() as u64;
            for lead in 0..self.n {
                // first nonzero coordinate is `lead`, equal to 1
                let free = self.n - lead - 1;
                for idx in 0..qk.pow(free as u32) {
                    let mut x = vec![Fe::ZERO; self.n];
                    x[lead] = Fe::ONE;
                    let mut r = idx;
                    for slot in x.iter_mut().skip(lead + 1) {
                        *slot = Fe((r % qk) as u32);
                        r /= qk;
                    }
                    if form.is_singular_at(&x, &ext)? {
                        return Ok(ProbeOutcome::Singular { k, point: x });
                    }
                }
            }
        }
        Ok(ProbeOutcome::NoSingularPoint { k_max })
    }

    fn is_singular_at(&self, x: &[Fe], field: &Fq) -> Result<bool> {
        if !self.eval(x, field)?.is_zero() {
            return Ok(false);
        }
        // dF/dx_i = d * Psi_i(x, ..., x) and d is a unit
        let args: Vec<&[Fe]> = vec![x; self.d - 1];
        for i in 0..self.n {
            if !self.eval_multilinear(i, &args, field)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// No singular point over `F_{q^k}` for any `k <= k_max`.
    NoSingularPoint { k_max: u32 },
    /// A singular point with coordinates in `F_{q^k}` (as built by `Fq::extension`).
    Singular { k: u32, point: Vec<Fe> },
}

fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().rev().fold(0, |acc, &i| acc * n + i)
}

fn unflatten(mut k: usize, n: usize, len: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(k % n);
        k /= n;
    }
    v
}

/// Parse a form file: one monomial per line, `e_1 ... e_n : c`, where `c` is
/// an integer or a power-basis vector `[c_0,c_1,...]`. Blank lines and `#`
/// comments are skipped.
pub fn parse_form(text: &str, n: usize, d: usize, field: &Fq) -> Result<HypersurfaceForm> {
    let mut monos = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let (lhs, rhs) = line.split_once(':').ok_or_else(|| err("expected `e_1 ... e_n : c`".into()))?;
        let exps: Vec<u32> = lhs
            .split_whitespace()
            .map(|s| s.parse::<u32>().map_err(|_| err(format!("bad exponent `{s}`"))))
            .collect::<Result<_>>()?;
        if exps.len() != n {
            return Err(err(format!("{} exponents given, expected {n}", exps.len())));
        }
        let deg: u32 = exps.iter().sum();
        if deg as usize != d {
            return Err(err(format!("monomial degree {deg} differs from d = {d}")));
        }
        let coeff = parse_field_element(rhs.trim(), field).map_err(|e| err(e.to_string()))?;
        monos.push(Monomial { exps, coeff });
    }
    HypersurfaceForm::symmetrize(&monos, n, d, field)
}

/// An integer representative or a bracketed power-basis coordinate vector.
pub fn parse_field_element(s: &str, field: &Fq) -> Result<Fe> {
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let coords: Vec<i64> = inner
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Domain(format!("bad coordinate `{c}`"))))
            .collect::<Result<_>>()?;
        let p = field.p() as i64;
        let reduced: Vec<u32> = coords.iter().map(|c| c.rem_euclid(p) as u32).collect();
        return field.from_coords(&reduced);
    }
    let v: i64 = s.parse().map_err(|_| Error::Domain(format!("bad coefficient `{s}`")))?;
    Ok(field.from_int(v))
}

/// Fermat form `x_1^d + ... + x_n^d`.
pub fn fermat(n: usize, d: usize, field: &Fq) -> Result<HypersurfaceForm> {
    let monos: Vec<Monomial> = (0..n)
        .map(|i| {
            let mut exps = vec![0u32; n];
            exps[i] = d as u32;
            Monomial { exps, coeff: Fe::ONE }
        })
        .collect();
    HypersurfaceForm::symmetrize(&monos, n, d, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mono(exps: &[u32], c: u32) -> Monomial {
        Monomial { exps: exps.to_vec(), coeff: Fe(c) }
    }

    fn random_form(rng: &mut ChaCha8Rng, n: usize, d: usize, field: &Fq) -> HypersurfaceForm {
        let mut monos = Vec::new();
        for _ in 0..6 {
            let mut exps = vec![0u32; n];
            for _ in 0..d {
                exps[rng.gen_range(0..n)] += 1;
            }
            monos.push(Monomial { exps, coeff: Fe(rng.gen_range(0..field.order())) });
        }
        HypersurfaceForm::symmetrize(&monos, n, d, field).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, field: &Fq) -> Vec<Fe> {
        (0..n).map(|_| Fe(rng.gen_range(0..field.order()))).collect()
    }

    #[test]
    fn symmetrize_examples() {
        let f7 = Fq::prime(7).unwrap();
        let cube = HypersurfaceForm::symmetrize(&[mono(&[3], 1)], 1, 3, &f7).unwrap();
        assert_eq!(cube.tensor_entry(&[0, 0, 0]).unwrap(), Fe::ONE);
        let f = HypersurfaceForm::symmetrize(&[mono(&[2, 1], 1)], 2, 3, &f7).unwrap();
        for idx in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
            assert_eq!(f.tensor_entry(&idx).unwrap(), Fe(5));
        }
        assert_eq!(f.tensor_entry(&[1, 1, 0]).unwrap(), Fe::ZERO);
        let f3 = Fq::prime(3).unwrap();
        assert!(HypersurfaceForm::symmetrize(&[mono(&[3], 1)], 1, 3, &f3).is_err());
        assert!(HypersurfaceForm::symmetrize(&[mono(&[2, 0], 1)], 2, 3, &f7).is_err());
    }

    #[test]
    fn tensor_and_monomial_evaluation_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [5u32, 7, 11] {
            let field = Fq::prime(p).unwrap();
            for (n, d) in [(2, 3), (3, 3), (3, 4)] {
                if p as usize <= d {
                    continue;
                }
                let f = random_form(&mut rng, n, d, &field);
                for _ in 0..200 {
                    let x = random_vec(&mut rng, n, &field);
                    assert_eq!(f.eval(&x, &field).unwrap(), f.eval_tensor(&x, &field).unwrap());
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f5 = Fq::prime(5).unwrap();
        let f = fermat(2, 3, &f5).unwrap();
        assert_eq!(f.eval(&[Fe(1), Fe(4)], &f5).unwrap(), Fe::ZERO);
        assert!(f.eval(&[Fe(1)], &f5).is_err());
        // (t)^3 + (4t+1)^3 = t^3 + 64t^3 + 48t^2 + 12t + 1 = 1 + 2t + 3t^2
        let x = [Poly::from_ints(&f5, &[0, 1]), Poly::from_ints(&f5, &[1, 4])];
        let direct = x[0].pow(3, &f5).add(&x[1].pow(3, &f5), &f5);
        assert_eq!(f.eval(&x, &f5).unwrap(), direct);
        assert_eq!(direct, Poly::from_ints(&f5, &[1, 2, 3]));
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let field = Fq::prime(7).unwrap();
        let f = random_form(&mut rng, 3, 3, &field);
        for _ in 0..100 {
            let x = random_vec(&mut rng, 3, &field);
            let lam = Fe(rng.gen_range(0..7));
            let lx: Vec<Fe> = x.iter().map(|&v| field.mul(lam, v)).collect();
            assert_eq!(f.eval(&lx, &field).unwrap(), field.mul(field.pow(lam, 3), f.eval(&x, &field).unwrap()));
        }
    }

    #[test]
    fn multilinear_examples_and_identities() {
        let f5 = Fq::prime(5).unwrap();
        let cube = fermat(1, 3, &f5).unwrap();
        assert_eq!(cube.eval_multilinear(0, &[&[Fe(1)], &[Fe(1)]], &f5).unwrap(), Fe::ONE);
        assert_eq!(cube.eval_multilinear(0, &[&[Fe(2)], &[Fe(3)]], &f5).unwrap(), Fe(1));
        assert!(cube.eval_multilinear(0, &[&[Fe(1)]], &f5).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, n, d) in [(7u32, 3usize, 3usize), (7, 2, 4), (11, 3, 5)] {
            let field = Fq::prime(p).unwrap();
            let f = random_form(&mut rng, n, d, &field);
            for _ in 0..200 {
                let x = random_vec(&mut rng, n, &field);
                let args: Vec<&[Fe]> = vec![&x; d - 1];
                let psi = f.eval_multilinear_all(&args, &field).unwrap();
                let euler = field.sum(x.iter().zip(&psi).map(|(&a, &b)| field.mul(a, b)));
                assert_eq!(euler, f.eval(&x, &field).unwrap());

                let vs: Vec<Vec<Fe>> = (0..d - 1).map(|_| random_vec(&mut rng, n, &field)).collect();
                let refs: Vec<&[Fe]> = vs.iter().map(|v| v.as_slice()).collect();
                let base = f.eval_multilinear_all(&refs, &field).unwrap();
                // swap two arguments
                let mut swapped = refs.clone();
                swapped.swap(0, d - 2);
                assert_eq!(f.eval_multilinear_all(&swapped, &field).unwrap(), base);
                // linearity in the first slot
                let extra = random_vec(&mut rng, n, &field);
                let sum: Vec<Fe> = vs[0].iter().zip(&extra).map(|(&a, &b)| field.add(a, b)).collect();
                let mut with_sum = refs.clone();
                with_sum[0] = &sum;
                let mut with_extra = refs.clone();
                with_extra[0] = &extra;
                let lhs = f.eval_multilinear_all(&with_sum, &field).unwrap();
                let rhs = f.eval_multilinear_all(&with_extra, &field).unwrap();
                for i in 0..n {
                    assert_eq!(lhs[i], field.add(base[i], rhs[i]));
                }
            }
        }
    }

    #[test]
    fn tensor_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let field = Fq::prime(11).unwrap();
        let f = random_form(&mut rng, 3, 4, &field);
        for _ in 0..200 {
            let idx: Vec<usize> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let mut perm = idx.clone();
            for k in (1..4).rev() {
                perm.swap(k, rng.gen_range(0..=k));
            }
            assert_eq!(f.tensor_entry(&idx).unwrap(), f.tensor_entry(&perm).unwrap());
        }
    }

    #[test]
    fn poly_evaluation_matches_multilinear() {
        let f5 = Fq::prime(5).unwrap();
        let f = fermat(3, 3, &f5).unwrap();
        let x: Vec<Poly> = vec![Poly::from_ints(&f5, &[1, 2]), Poly::from_ints(&f5, &[0, 3]), Poly::from_ints(&f5, &[4])];
        let args: Vec<&[Poly]> = vec![&x, &x];
        let psi = f.eval_multilinear_all(&args, &f5).unwrap();
        let euler = x.iter().zip(&psi).fold(Poly::zero(), |acc, (a, b)| acc.add(&a.mul(b, &f5), &f5));
        assert_eq!(euler, f.eval(&x, &f5).unwrap());
    }

    #[test]
    fn smoothness_probe_examples() {
        let f5 = Fq::prime(5).unwrap();
        let fermat3 = fermat(3, 3, &f5).unwrap();
        assert_eq!(
            fermat3.smoothness_probe(&f5, 2, Budget::default()).unwrap(),
            ProbeOutcome::NoSingularPoint { k_max: 2 }
        );
        let sing = HypersurfaceForm::symmetrize(&[mono(&[2, 1, 0], 1)], 3, 3, &f5).unwrap();
        match sing.smoothness_probe(&f5, 1, Budget::default()).unwrap() {
            ProbeOutcome::Singular { k: 1, point } => {
                assert_eq!(sing.eval(&point, &f5).unwrap(), Fe::ZERO);
                assert!(point[0].is_zero());
            }
            other => panic!("expected a singular witness, got {other:?}"),
        }
        let line_cube = HypersurfaceForm::symmetrize(&[mono(&[3, 0], 1)], 2, 3, &f5).unwrap();
        assert_eq!(
            line_cube.smoothness_probe(&f5, 1, Budget::default()).unwrap(),
            ProbeOutcome::Singular { k: 1, point: vec![Fe::ZERO, Fe::ONE] }
        );
        assert!(matches!(fermat3.smoothness_probe(&f5, 3, Budget(1000)), Err(Error::Budget { .. })));
    }

    #[test]
    fn parse_form_file() {
        let f5 = Fq::prime(5).unwrap();
        let text = "# fermat\n3 0 0 : 1\n0 3 0 : 1\n\n0 0 3 : [1]\n";
        assert_eq!(parse_form(text, 3, 3, &f5).unwrap(), fermat(3, 3, &f5).unwrap());
        match parse_form("3 0 0 : 1\n2 0 0 : 1\n", 3, 3, &f5) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected a line-2 parse error, got {other:?}"),
        }
        assert!(matches!(parse_form("3 0 : 1", 3, 3, &f5), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_form("3 0 0 1", 3, 3, &f5), Err(Error::Parse { line: 1, .. })));
        let f25 = Fq::new(&crate::field::FieldSpec::extension(5, vec![2, 0, 1])).unwrap();
        let g = parse_form("3 0 : [0,1]\n0 3 : 2\n", 2, 3, &f25).unwrap();
        assert_eq!(g.monomials()[1].coeff, f25.generator());
    }
}
