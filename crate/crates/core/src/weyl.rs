//! Counting functions produced by Weyl differencing and the inequalities
//! relating them to `S(alpha)`.
//!
//! Every count has the shape
//! `#{(u_1, ..., u_{d-1}) : deg u_j < b_j, ||alpha Psi_i(u)|| < q^(-m) for all i}`.
//! `Psi_i` is linear in the last slot, so for each prefix `u_1 .. u_{d-2}` the
//! admissible last vectors form an `F_q`-subspace, counted as `q^(n b - rank)`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rayon::prelude::*;

use crate::audit::{eta_choice, gamma_raw, kappa, l_value, route_b_condition, RouteB};
use crate::circle::{CountingProblem, SumEngine};
use crate::cyclo::{cyclo_mag_compare, CyclotomicValue, MagCmp};
use crate::error::{pow_saturating, Budget, Error, Result};
use crate::field::{Fe, Fq};
use crate::kinfty::{LaurentElement, Magnitude};
pub use crate::linalg::rank_fq;
use crate::linalg::rank_flat;
use crate::poly::Poly;

/// Slot boxes `deg u_j < boxes[j]` and the norm threshold exponent `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylShape {
    pub boxes: Vec<usize>,
    pub threshold: i64,
}

impl WeylShape {
    /// Depth of `alpha` the count reads: `m + sum_j (b_j - 1)`.
    pub fn depth(&self) -> usize {
        if self.threshold <= 0 {
            return 0;
        }
        let spread: usize = self.boxes.iter().map(|&b| b.max(1) - 1).sum();
        self.threshold as usize + spread
    }

    /// `N(alpha)`: boxes `|u_j| < |P|`, threshold `|P|^-1`.
    pub fn n(prob: &CountingProblem) -> Self {
        WeylShape { boxes: vec![prob.e() + 1; prob.d() - 1], threshold: prob.e() as i64 + 1 }
    }

    /// `N_eta(alpha)` with `h = (e+1) eta`.
    pub fn n_eta(prob: &CountingProblem, h: usize) -> Result<Self> {
        if h > prob.e() + 1 {
            return Err(Error::Domain(format!("(e+1) eta = {h} exceeds e+1 = {}", prob.e() + 1)));
        }
        let d = prob.d() as i64;
        Ok(WeylShape { boxes: vec![h; prob.d() - 1], threshold: d * prob.p_deg() - (d - 1) * h as i64 })
    }

    /// `M^(v)(alpha)`: the first `v - 1` slots are constants.
    pub fn m_v(prob: &CountingProblem, v: usize) -> Result<Self> {
        if v == 0 || v > prob.d() {
            return Err(Error::Domain(format!("v = {v} outside 1..={}", prob.d())));
        }
        let boxes = (0..prob.d() - 1).map(|j| if j + 1 < v { 1 } else { prob.e() + 1 }).collect();
        Ok(WeylShape { boxes, threshold: prob.p_deg() })
    }

    /// The curly `N`: boxes `|u_j| <= q^kappa`, threshold `q^(kappa(d-1) - de - 1)`.
    pub fn curly_n(prob: &CountingProblem, kappa: usize) -> Result<Self> {
        if kappa > 1 {
            return Err(Error::Domain(format!("kappa must be 0 or 1, got {kappa}")));
        }
        let d = prob.d() as i64;
        Ok(WeylShape {
            boxes: vec![kappa + 1; prob.d() - 1],
            threshold: d * prob.e() as i64 + 1 - kappa as i64 * (d - 1),
        })
    }
}

fn decode_slot(field: &Fq, mut index: u64, n: usize, b: usize) -> Vec<Poly> {
    let q = field.order() as u64;
    let block = q.pow(b as u32);
    (0..n)
        .map(|_| {
            let p = Poly::from_index(field, index % block, b);
            index /= block;
            p
        })
        .collect()
}

fn prefix_size(field: &Fq, n: usize, boxes: &[usize]) -> u128 {
    let total: usize = boxes.iter().sum();
    pow_saturating(field.order() as u64, (n * total) as u64)
}

fn decode_prefix(field: &Fq, mut index: u64, n: usize, boxes: &[usize]) -> Vec<Vec<Poly>> {
    let q = field.order() as u64;
    boxes
        .iter()
        .map(|&b| {
            let block = q.pow((n * b) as u32);
            let v = decode_slot(field, index % block, n, b);
            index /= block;
            v
        })
        .collect()
}

/// Exact count for a shape. `alpha` must be certified to `shape.depth()`.
///
/// For each prefix `(u_1..u_(d-2))` the last slot is a kernel, so it
/// contributes `q^(n b_last - rank)`. The matrix is affine in the last prefix
/// slot; it is assembled from one basis matrix per coordinate of that slot.
pub fn count_shape(prob: &CountingProblem, alpha: &LaurentElement, shape: &WeylShape, budget: Budget) -> Result<u128> {
    let field = prob.field();
    let n = prob.n();
    let d = prob.d();
    if shape.boxes.len() != d - 1 {
        return Err(Error::Domain(format!("shape has {} slots, expected {}", shape.boxes.len(), d - 1)));
    }
    let q = field.order() as u128;
    let total_slots: usize = shape.boxes.iter().sum();
    if shape.threshold <= 0 {
        return Ok(q.pow((n * total_slots) as u32));
    }
    let digits = alpha.negative_coeffs(shape.depth())?;
    let (prefix_boxes, last) = shape.boxes.split_at(d - 2);
    let b_last = last[0];
    let prefixes = prefix_size(field, n, prefix_boxes);
    budget.check(prefixes)?;
    if b_last == 0 {
        return Ok(prefixes);
    }
    let m = shape.threshold as usize;
    let cols = n * b_last;
    // flat `(n m) x cols` matrix; entry `((i, k), (j, s))` is the coefficient
    // of `t^-k` in `alpha * A_ij * t^s`
    let build = |prefix: &[Vec<Poly>]| -> Result<Vec<Fe>> {
        let refs: Vec<&[Poly]> = prefix.iter().map(|v| v.as_slice()).collect();
        let a = prob.form().contract(&refs, field)?;
        let mut mat = Vec::with_capacity(n * m * cols);
        for ai in &a {
            for k in 1..=m {
                for col in 0..cols {
                    let (j, s) = (col / b_last, col % b_last);
                    mat.push(ai[j].coeffs().iter().enumerate().fold(Fe::ZERO, |acc, (l, &c)| {
                        match digits.get(k + s + l - 1) {
                            Some(&dg) if !c.is_zero() => field.add(acc, field.mul(c, dg)),
                            _ => acc,
                        }
                    }));
                }
            }
        }
        Ok(mat)
    };
    let (outer_boxes, inner_b) = match prefix_boxes.split_last() {
        Some((&b, rest)) => (rest, Some(b)),
        None => (prefix_boxes, None),
    };
    let inner_dim = n * inner_b.unwrap_or(0);
    let inner_count = pow_saturating(q as u64, inner_dim as u64) as u64;
    let qq = q as u64;
    (0..prefix_size(field, n, outer_boxes) as u64)
        .into_par_iter()
        .map(|oi| -> Result<u128> {
            let mut prefix = decode_prefix(field, oi, n, outer_boxes);
            let zero_slot = vec![Poly::zero(); n];
            if inner_b.is_some() {
                prefix.push(zero_slot.clone());
            }
            let base = build(&prefix)?;
            // mults[c][v] = v * (basis matrix of coordinate c)
            let mut mults: Vec<Vec<Vec<Fe>>> = Vec::with_capacity(inner_dim);
            for c in 0..inner_dim {
                let b = inner_b.unwrap_or(1);
                let mut slot = zero_slot.clone();
                slot[c / b] = Poly::monomial(Fe::ONE, c % b);
                *prefix.last_mut().expect("inner slot") = slot;
                let mut mc = build(&prefix)?;
                for (x, &b0) in mc.iter_mut().zip(&base) {
                    *x = field.sub(*x, b0);
                }
                mults.push(field.elements().map(|v| mc.iter().map(|&y| field.mul(v, y)).collect()).collect());
            }
            let chunk = 1024u64;
            Ok((0..inner_count.div_ceil(chunk))
                .into_par_iter()
                .map(|ci| {
                    let (lo, hi) = (ci * chunk, ((ci + 1) * chunk).min(inner_count));
                    // odometer over the inner coordinates, updating the matrix by differences
                    let mut digit: Vec<usize> = (0..inner_dim).map(|c| ((lo / qq.pow(c as u32)) % qq) as usize).collect();
                    let mut mat = base.clone();
                    for (c, &u) in digit.iter().enumerate() {
                        for (x, &y) in mat.iter_mut().zip(&mults[c][u]) {
                            *x = field.add(*x, y);
                        }
                    }
                    let mut sum = 0u128;
                    for _ in lo..hi {
                        sum += q.pow((cols - rank_flat(mat.clone(), cols, field)) as u32);
                        for c in 0..inner_dim {
                            let old = digit[c];
                            let new = (old + 1) % qq as usize;
                            digit[c] = new;
                            for ((x, &a), &b) in mat.iter_mut().zip(&mults[c][new]).zip(&mults[c][old]) {
                                *x = field.add(*x, field.sub(a, b));
                            }
                            if new != 0 {
                                break;
                            }
                        }
                    }
                    sum
                })
                .sum::<u128>())
        })
        .try_reduce(|| 0, |x, y| Ok(x + y))
}

/// The same count by direct enumeration of every tuple.
pub fn count_shape_brute(prob: &CountingProblem, alpha: &LaurentElement, shape: &WeylShape, budget: Budget) -> Result<u128> {
    let field = prob.field();
    let n = prob.n();
    let total = prefix_size(field, n, &shape.boxes);
    budget.check(total)?;
    let mut count = 0u128;
    for idx in 0..total as u64 {
        let tuple = decode_prefix(field, idx, n, &shape.boxes);
        let refs: Vec<&[Poly]> = tuple.iter().map(|v| v.as_slice()).collect();
        let psi = prob.form().eval_multilinear_all(&refs, field)?;
        let mut ok = true;
        for p in psi {
            let v = alpha.mul(&LaurentElement::from_poly(&p), field);
            if !v.frac_norm_below(shape.threshold)? {
                ok = false;
                break;
            }
        }
        count += ok as u128;
    }
    Ok(count)
}

pub fn count_n(prob: &CountingProblem, alpha: &LaurentElement, budget: Budget) -> Result<u128> {
    count_shape(prob, alpha, &WeylShape::n(prob), budget)
}

/// `N_eta`; `(e+1) eta` must be an integer in `0 ..= e+1`.
pub fn count_n_eta(prob: &CountingProblem, alpha: &LaurentElement, eta: Rational64, budget: Budget) -> Result<u128> {
    count_shape(prob, alpha, &WeylShape::n_eta(prob, eta_to_h(prob, eta)?)?, budget)
}

pub fn count_m_v(prob: &CountingProblem, alpha: &LaurentElement, v: usize, budget: Budget) -> Result<u128> {
    count_shape(prob, alpha, &WeylShape::m_v(prob, v)?, budget)
}

pub fn count_curly_n(prob: &CountingProblem, alpha: &LaurentElement, kappa: usize, budget: Budget) -> Result<u128> {
    count_shape(prob, alpha, &WeylShape::curly_n(prob, kappa)?, budget)
}

/// `h = (e+1) eta`, rejecting non-integral values and `eta` outside `[0, 1]`.
pub fn eta_to_h(prob: &CountingProblem, eta: Rational64) -> Result<usize> {
    let h = eta * (prob.e() as i64 + 1);
    if !h.is_integer() || eta < Rational64::from_integer(0) || eta > Rational64::from_integer(1) {
        return Err(Error::Domain(format!("(e+1) eta = {h} must be an integer with 0 <= eta <= 1")));
    }
    Ok(h.to_integer() as usize)
}

/// `#{u : deg u_j < h, Psi_i(u) = 0 exactly}`.
pub fn count_u_eta(prob: &CountingProblem, h: usize, budget: Budget) -> Result<u128> {
    let field = prob.field();
    let n = prob.n();
    let d = prob.d();
    let q = field.order() as u128;
    let prefixes = prefix_size(field, n, &vec![h; d - 2]);
    budget.check(prefixes)?;
    let mut total = 0u128;
    for idx in 0..prefixes as u64 {
        let prefix = decode_prefix(field, idx, n, &vec![h; d - 2]);
        let refs: Vec<&[Poly]> = prefix.iter().map(|v| v.as_slice()).collect();
        let a = prob.form().contract(&refs, field)?;
        let top = a.iter().flatten().filter_map(|p| p.degree()).max().unwrap_or(0) + h;
        let mut rows = Vec::new();
        for ai in &a {
            for deg in 0..=top {
                rows.push(
                    (0..n * h)
                        .map(|col| {
                            let (j, s) = (col / h, col % h);
                            if deg >= s { ai[j].coeff(deg - s) } else { Fe::ZERO }
                        })
                        .collect(),
                );
            }
        }
        let rank = if h == 0 { 0 } else { rank_fq(rows, field) };
        total += q.pow((n * h - rank) as u32);
    }
    Ok(total)
}

fn q_power(q: u32, exp: i64) -> BigRational {
    crate::kinfty::q_pow(q, exp)
}

/// Exact comparison `|S|^(2^(d-1)) <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub lhs_value: CyclotomicValue,
    pub power: u32,
    pub rhs: BigRational,
    pub holds: bool,
}

fn compare(s: &CyclotomicValue, power: u32, rhs: BigRational) -> Result<InequalityReport> {
    let holds = cyclo_mag_compare(s, &rhs, power)? == MagCmp::AtMost;
    Ok(InequalityReport { lhs_value: s.clone(), power, rhs, holds })
}

fn weyl_power(prob: &CountingProblem) -> u32 {
    1 << (prob.d() - 1)
}

/// `|S(alpha)|^(2^(d-1)) <= |P|^((2^(d-1) - d + 1) n) N(alpha)`.
pub fn check_weyl(engine: &SumEngine, alpha: &LaurentElement, budget: Budget) -> Result<(InequalityReport, u128)> {
    let prob = engine.problem();
    let s = engine.exp_sum(alpha)?;
    let n_alpha = count_n(prob, alpha, budget)?;
    let w = weyl_power(prob) as i64;
    let exp = prob.p_deg() * (w - prob.d() as i64 + 1) * prob.n() as i64;
    let rhs = q_power(prob.q(), exp) * BigRational::from_integer(BigInt::from(n_alpha));
    Ok((compare(&s, w as u32, rhs)?, n_alpha))
}

/// The `M^(v)` chain: `|S|^(2^(d-1)) <= |P|^((2^(d-1)-d+1)n) q^(e(v-1)n) M^(v)`.
pub fn check_m_v_chain(engine: &SumEngine, alpha: &LaurentElement, v: usize, budget: Budget) -> Result<(InequalityReport, u128)> {
    let prob = engine.problem();
    let s = engine.exp_sum(alpha)?;
    let mv = count_m_v(prob, alpha, v, budget)?;
    let w = weyl_power(prob) as i64;
    let n = prob.n() as i64;
    let exp = prob.p_deg() * (w - prob.d() as i64 + 1) * n + prob.e() as i64 * (v as i64 - 1) * n;
    let rhs = q_power(prob.q(), exp) * BigRational::from_integer(BigInt::from(mv));
    Ok((compare(&s, w as u32, rhs)?, mv))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkReport {
    pub h: usize,
    pub n_alpha: u128,
    pub n_eta: u128,
    /// `|P|^((n - eta n)(d-1)) N_eta`
    pub rhs: BigInt,
    pub holds: bool,
}

/// `N(alpha) <= |P|^((n - eta n)(d-1)) N_eta(alpha)` under `(e+1)(eta+1)/2 in Z`.
pub fn check_shrink(prob: &CountingProblem, alpha: &LaurentElement, eta: Rational64, budget: Budget) -> Result<ShrinkReport> {
    Ok(check_shrink_etas(prob, alpha, &[eta], budget)?.remove(0))
}

/// `check_shrink` for several `eta` at one `alpha`, counting `N(alpha)` once.
pub fn check_shrink_etas(prob: &CountingProblem, alpha: &LaurentElement, etas: &[Rational64], budget: Budget) -> Result<Vec<ShrinkReport>> {
    let mut hs = Vec::with_capacity(etas.len());
    for &eta in etas {
        let h = eta_to_h(prob, eta)?;
        if (prob.e() + 1 + h) % 2 != 0 {
            return Err(Error::Domain(format!("(e+1)(eta+1)/2 is not an integer for e = {}, (e+1) eta = {h}", prob.e())));
        }
        hs.push(h);
    }
    let n_alpha = count_n(prob, alpha, budget)?;
    hs.into_iter()
        .map(|h| {
            let n_eta = count_shape(prob, alpha, &WeylShape::n_eta(prob, h)?, budget)?;
            let exp = (prob.e() + 1 - h) * prob.n() * (prob.d() - 1);
            let rhs = BigInt::from(prob.q()).pow(exp as u32) * BigInt::from(n_eta);
            Ok(ShrinkReport { h, n_alpha, n_eta, holds: BigInt::from(n_alpha) <= rhs, rhs })
        })
        .collect()
}

/// `|S|^(2^(d-1)) <= q^((e+1) 2^(d-1) n - (1+kappa)(d-1) n) * curly N`.
pub fn check_curly_n_chain(engine: &SumEngine, alpha: &LaurentElement, budget: Budget) -> Result<(InequalityReport, u128)> {
    let prob = engine.problem();
    let kap = kappa(prob.e() as i64) as usize;
    let s = engine.exp_sum(alpha)?;
    let cn = count_curly_n(prob, alpha, kap, budget)?;
    let w = weyl_power(prob) as i64;
    let n = prob.n() as i64;
    let exp = prob.p_deg() * w * n - (1 + kap as i64) * (prob.d() as i64 - 1) * n;
    let rhs = q_power(prob.q(), exp) * BigRational::from_integer(BigInt::from(cn));
    Ok((compare(&s, w as u32, rhs)?, cn))
}

/// A point `a/r + theta` of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSample {
    pub a: Poly,
    pub r: Poly,
    pub theta: LaurentElement,
}

impl ArcSample {
    pub fn alpha(&self, depth: usize, field: &Fq) -> Result<LaurentElement> {
        let c = crate::kinfty::expand_rational(&self.a, &self.r, -(depth as i64), field)?;
        Ok(c.add(&self.theta, field).with_floor(-(depth as i64)))
    }

    pub fn deg_r(&self) -> Result<i64> {
        self.r
            .degree()
            .map(|d| d as i64)
            .ok_or_else(|| Error::Domain("r must be nonzero".into()))
    }

    /// `-ord theta`, `None` for `theta = 0`.
    pub fn beta(&self) -> Result<Option<i64>> {
        Ok(match self.theta.abs_value()? {
            Magnitude::Zero => None,
            Magnitude::Pow(k) => Some(-k),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseLemma {
    /// `|S| <= c |P|^(n - L eta)` with `(e+1) eta = h`.
    Eta { h: i64 },
    /// `|S| <= c' |P|^n q^-L` for `deg r >= 1`.
    LargeR(RouteB),
    /// `|S| <= c'' |P|^n q^-L` for `r = 1`.
    ThetaOnly,
}

impl PointwiseLemma {
    pub fn label(&self) -> String {
        match self {
            PointwiseLemma::Eta { h } => format!("eta(h={h})"),
            PointwiseLemma::LargeR(why) => format!("deg-r-positive({})", why.label()),
            PointwiseLemma::ThetaOnly => "deg-r-zero".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseMeasurement {
    pub lemma: PointwiseLemma,
    /// exponent `E` of the bound `q^E` without its constant
    pub bound_exponent: Rational64,
    /// `|S| / q^E`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport {
    pub s_value: CyclotomicValue,
    pub s_abs: f64,
    pub measurements: Vec<PointwiseMeasurement>,
    /// hypotheses that failed, one reason each
    pub rejected: Vec<String>,
}

/// Measure `|S(a/r + theta)|` against every pointwise bound whose hypotheses hold.
pub fn check_pointwise_bounds(engine: &SumEngine, arc: &ArcSample) -> Result<PointwiseReport> {
    let prob = engine.problem();
    let field = prob.field();
    if !arc.r.is_monic() {
        return Err(Error::Domain("r must be monic".into()));
    }
    if arc.a.degree().unwrap_or(0) >= arc.r.degree().unwrap_or(0) && !arc.a.is_zero() {
        return Err(Error::Domain("need |a| < |r|".into()));
    }
    if arc.theta.abs_value()? >= Magnitude::Pow(0) {
        return Err(Error::Domain("theta must lie in T".into()));
    }
    let alpha = arc.alpha(prob.depth(), field)?;
    let s = engine.exp_sum(&alpha)?;
    let s_abs = s.abs_f64();
    let (lemmas, rejected) = applicable_lemmas(prob, arc.deg_r()?, arc.beta()?)?;
    let measurements = lemmas
        .into_iter()
        .map(|(lemma, exp)| PointwiseMeasurement { lemma, bound_exponent: exp, ratio: s_abs / q_pow_f64(prob.q(), exp) })
        .collect();
    Ok(PointwiseReport { s_value: s, s_abs, measurements, rejected })
}

fn q_pow_f64(q: u32, exp: Rational64) -> f64 {
    (q as f64).powf(*exp.numer() as f64 / *exp.denom() as f64)
}

/// The pointwise bounds whose hypotheses hold at `(deg r, beta)`, each with
/// the exponent `E` of its shape `q^E`, and a reason for each one that fails.
pub fn applicable_lemmas(prob: &CountingProblem, deg_r: i64, beta: Option<i64>) -> Result<(Vec<(PointwiseLemma, Rational64)>, Vec<String>)> {
    let (d, e, n) = (prob.d() as u32, prob.e() as i64, prob.n() as i64);
    let l = l_value(n, d);
    let full = Rational64::from_integer(prob.p_deg() * n);
    let mut lemmas = Vec::new();
    let mut rejected = Vec::new();
    // the eta lemma holds for every a/r + theta with theta in T
    let gamma = gamma_raw(d, e, deg_r, beta);
    if gamma < Rational64::from_integer(0) {
        rejected.push(format!("eta lemma: Gamma = {gamma} is negative (theta too large for any arc)"));
    } else {
        match eta_choice(gamma, e)? {
            Some(h) => lemmas.push((PointwiseLemma::Eta { h }, full - l * h)),
            None => rejected.push(format!("eta lemma: no parity floor of Gamma = {gamma}")),
        }
    }
    match route_b_condition(d, e, deg_r, beta) {
        Some(RouteB::ThetaWindow) => lemmas.push((PointwiseLemma::ThetaOnly, full - l)),
        Some(why) => lemmas.push((PointwiseLemma::LargeR(why), full - l)),
        None if deg_r == 0 => rejected.push(format!(
            "deg r = 0 lemma: need q^-{} <= |theta| <= q^-{}, got beta = {beta:?}",
            prob.depth(),
            1 + kappa(e) * (d as i64 - 1)
        )),
        None => rejected.push(format!("deg r >= 1 lemma: (deg r, beta) = ({deg_r}, {beta:?}) meets neither hypothesis")),
    }
    Ok((lemmas, rejected))
}

/// All arcs `a/r + theta` with `r` monic of degree `deg_r`, `(a, r) = 1`, and
/// `theta = 0` (`beta = None`) or `-ord theta = beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArcShape {
    pub deg_r: usize,
    pub beta: Option<i64>,
}

impl ArcShape {
    pub fn label(&self) -> String {
        match self.beta {
            Some(b) => format!("deg_r={},beta={b}", self.deg_r),
            None => format!("deg_r={},theta=0", self.deg_r),
        }
    }

    /// Atoms (depth-B digit indices) of every arc of the shape, with repetition.
    pub fn atoms(&self, prob: &CountingProblem) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.for_each_atom(prob, |a| out.push(a))?;
        Ok(out)
    }

    /// Visit the atoms of every arc of the shape. Around a centre with digits
    /// `c`, `theta` of exact order `-beta` keeps digits `1..beta-1`, moves
    /// digit `beta` off `c_beta` and frees the rest, so the atoms form a block
    /// of indices.
    pub fn for_each_atom(&self, prob: &CountingProblem, mut visit: impl FnMut(u64)) -> Result<()> {
        let field = prob.field();
        let depth = prob.depth();
        let q = prob.q() as u64;
        if let Some(b) = self.beta {
            if b < 1 || b > depth as i64 {
                return Err(Error::Domain(format!("beta = {b} outside 1..={depth}: theta would not be seen at depth {depth}")));
            }
        }
        for r in crate::poly::monic_of_degree(field, self.deg_r) {
            // digits of a/r are linear in a: expand t^i / r once
            let basis = (0..self.deg_r)
                .map(|i| crate::kinfty::expand_rational(&Poly::monomial(Fe::ONE, i), &r, -(depth as i64), field)?.negative_coeffs(depth))
                .collect::<Result<Vec<_>>>()?;
            for a in crate::poly::all_below_degree(field, self.deg_r) {
                let reduced = if self.deg_r == 0 { a.is_zero() } else { !a.is_zero() && crate::poly::poly_gcd(&a, &r, field)?.degree() == Some(0) };
                if !reduced {
                    continue;
                }
                let mut c = vec![Fe::ZERO; depth];
                for (&ai, row) in a.coeffs().iter().zip(&basis) {
                    for (x, &y) in c.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(ai, y));
                    }
                }
                let Some(b) = self.beta else {
                    visit(crate::circle::atom_index(&c, prob.q()));
                    continue;
                };
                let b = b as usize;
                let prefix = crate::circle::atom_index(&c[..b - 1], prob.q());
                let unit = q.pow(b as u32 - 1);
                let tail_unit = unit * q;
                for digit in (0..q).filter(|&v| v != c[b - 1].0 as u64) {
                    for tail in 0..q.pow((depth - b) as u32) {
                        visit(prefix + unit * digit + tail_unit * tail);
                    }
                }
            }
        }
        Ok(())
    }
}

/// The largest `|S|` over a shape against each applicable bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeMeasurement {
    pub shape: ArcShape,
    pub lemma: PointwiseLemma,
    pub bound_exponent: Rational64,
    pub arcs: usize,
    pub max_abs_s: f64,
    pub ratio: f64,
}

/// Every shape `(deg r, beta)` with `deg r <= floor(Q)`, `beta` in `{none} u [1, B]`,
/// excluding the major arc's centre `(0, none)`.
pub fn default_shapes(prob: &CountingProblem) -> Vec<ArcShape> {
    let mut v = Vec::new();
    for deg_r in 0..=prob.q_floor() as usize {
        for beta in std::iter::once(None).chain((1..=prob.depth() as i64).map(Some)) {
            if deg_r == 0 && beta.is_none() {
                continue;
            }
            v.push(ArcShape { deg_r, beta });
        }
    }
    v
}

/// Sweep shapes using a precomputed table of `|S|` per atom.
pub fn measure_shapes(engine: &SumEngine, shapes: &[ArcShape], budget: Budget) -> Result<Vec<ShapeMeasurement>> {
    let prob = engine.problem();
    let table = engine.atom_table(budget)?;
    let abs: Vec<f64> = (0..table.len() as u64).into_par_iter().map(|a| table.value(a).abs_f64()).collect();
    let mut out = Vec::new();
    for &shape in shapes {
        let (lemmas, _) = applicable_lemmas(prob, shape.deg_r as i64, shape.beta)?;
        if lemmas.is_empty() {
            continue;
        }
        let (mut arcs, mut max_abs_s) = (0usize, 0.0f64);
        shape.for_each_atom(prob, |a| {
            arcs += 1;
            max_abs_s = max_abs_s.max(abs[a as usize]);
        })?;
        for (lemma, exp) in lemmas {
            out.push(ShapeMeasurement { shape, lemma, bound_exponent: exp, arcs, max_abs_s, ratio: max_abs_s / q_pow_f64(prob.q(), exp) });
        }
    }
    Ok(out)
}

/// Whether an arc sample lies in the major arc (`r = 1`, `|theta| < q^-B`).
pub fn is_major(prob: &CountingProblem, arc: &ArcSample) -> Result<bool> {
    Ok(arc.deg_r()? == 0 && arc.theta.abs_value()? < Magnitude::Pow(-(prob.depth() as i64)))
}
