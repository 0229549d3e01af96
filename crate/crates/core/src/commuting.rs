//! The commuting families: diagonal tensor powers, the recursive
//! family S, the power-sum combinations P, the twisted-trace lattice
//! element, and the closed-form generating series they satisfy.
//!
//! Family indices are 0-based throughout: index i labels the family
//! whose rank-one member is the diagonal with ones on labels <= i (the
//! usual 1-based index shifts down by one). The alias at index -1 is
//! q^k times the last family.

use crate::error::Error;
use crate::family::{AlgebraTag, ScalarFn, ShuffleElement, TensorFamily};
use crate::field::Coefficient;
use crate::jet::JetScalar;
use crate::point::EvalPoint;
use crate::series::{ElementSeries, UMono};
use crate::shuffle::{
    scale_by_variable, shuffle_product, shuffle_product_prime, unit_element,
};
use crate::space::{EmbeddingSpec, GradedSpace};
use crate::tensor::Tensor;
use crate::trace_maps::{psi, psi_tilde};
use crate::Result;
use std::sync::Arc;

/// The twist matrix: diag(u_1 .. u_dim) with the point's twist values.
pub fn u_hat(pt: &EvalPoint, space: &GradedSpace) -> Result<Tensor> {
    if pt.us.len() < space.dim() {
        return Err(Error::Config("evaluation point carries too few twist values".into()));
    }
    Tensor::diagonal(space.clone(), &pt.us[..space.dim()])
}

/// E_ii^(x)k as an element of the chosen algebra.
pub fn h_element(space: &GradedSpace, i: usize, k: usize, tag: AlgebraTag) -> Result<ShuffleElement> {
    space.check_label(i)?;
    if k == 0 {
        return Ok(unit_element(space, tag));
    }
    let unit = Tensor::matrix_unit(space.clone(), i, i, crate::point::DEFAULT_ORDER)?;
    let mut acc = unit.clone();
    for _ in 1..k {
        acc = acc.kron(&unit)?;
    }
    // constant tensors ignore the jet order of the build; rebuild per point
    let space2 = space.clone();
    let fam = TensorFamily::new(
        space.clone(),
        k,
        true,
        1,
        Arc::new(move |pt, _zs| {
            if pt.order == acc.order() {
                return Ok(acc.clone());
            }
            let unit = Tensor::matrix_unit(space2.clone(), i, i, pt.order)?;
            let mut t = unit.clone();
            for _ in 1..k {
                t = t.kron(&unit)?;
            }
            Ok(t)
        }),
    );
    Ok(ShuffleElement::new(fam, tag).with_claims(true, true))
}

/// The rank-one member of family i: -1/(1-q) diag(1 .. 1, q .. q) with
/// ones on labels <= i.
pub fn s1_element(space: &GradedSpace, i: usize) -> Result<ShuffleElement> {
    space.check_label(i)?;
    let space2 = space.clone();
    let fam = TensorFamily::new(
        space.clone(),
        1,
        true,
        4,
        Arc::new(move |pt, _zs| {
            let one = JetScalar::one(pt.order);
            let pre = one.sub(&pt.q).inv()?.neg();
            let diag: Vec<JetScalar> = (0..space2.dim())
                .map(|j| if j <= i { pre.clone() } else { pre.mul(&pt.q) })
                .collect();
            Tensor::diagonal(space2.clone(), &diag)
        }),
    );
    Ok(ShuffleElement::new(fam, AlgebraTag::Plus).with_claims(true, true))
}

/// Shuffle commutator a * b - b * a.
pub fn commutator(a: &ShuffleElement, b: &ShuffleElement) -> Result<ShuffleElement> {
    shuffle_product(a, b)?.add(&shuffle_product(b, a)?.neg())
}

/// The recursive family: (z_1 + .. + z_k) S_k = [S_{k-1}, z_1 S_1],
/// divided pointwise by the (generically nonzero) variable sum.
pub fn s_element(space: &GradedSpace, i: usize, k: usize) -> Result<ShuffleElement> {
    space.check_label(i)?;
    if k == 0 {
        return Ok(unit_element(space, AlgebraTag::Plus));
    }
    if k == 1 {
        return s1_element(space, i);
    }
    let prev = s_element(space, i, k - 1)?;
    let z1s1 = scale_by_variable(&s1_element(space, i)?, 0);
    let comm = commutator(&prev, &z1s1)?;
    let fam = comm.family.clone();
    let out = TensorFamily::new(
        space.clone(),
        k,
        true,
        fam.degree_bound + 2,
        Arc::new(move |pt, zs| {
            let mut sum = JetScalar::zero(pt.order);
            for z in zs {
                sum = sum.add(z);
            }
            if sum.is_zero() {
                return Err(Error::SumOfVariablesZero);
            }
            Ok(fam.eval(pt, zs)?.scale(&sum.inv()?))
        }),
    );
    Ok(ShuffleElement::new(out, AlgebraTag::Plus).with_claims(true, true))
}

/// The general split of the same recursion:
/// [S_{k-l}, (z_1 + .. + z_l) S_l] / (z_1 + .. + z_k), used to check
/// that the defining relations are mutually consistent.
pub fn s_element_via_split(space: &GradedSpace, i: usize, k: usize, l: usize) -> Result<ShuffleElement> {
    if l == 0 || l >= k {
        return Err(Error::Config("split must satisfy 0 < l < k".into()));
    }
    let left = s_element(space, i, k - l)?;
    let mut right = scale_by_variable(&s_element(space, i, l)?, 0);
    for idx in 1..l {
        right = right.add(&scale_by_variable(&s_element(space, i, l)?, idx))?;
    }
    let comm = commutator(&left, &right)?;
    let fam = comm.family.clone();
    let out = TensorFamily::new(
        space.clone(),
        k,
        true,
        fam.degree_bound + 2,
        Arc::new(move |pt, zs| {
            let mut sum = JetScalar::zero(pt.order);
            for z in zs {
                sum = sum.add(z);
            }
            if sum.is_zero() {
                return Err(Error::SumOfVariablesZero);
            }
            Ok(fam.eval(pt, zs)?.scale(&sum.inv()?))
        }),
    );
    Ok(ShuffleElement::new(out, AlgebraTag::Plus))
}

/// Scalar helper: q^k as a closure.
fn q_pow_fn(k: i64) -> ScalarFn {
    Arc::new(move |pt| pt.q.pow(k))
}

/// The power-sum combinations: P_k at index 0 is q^k S_k^(last) -
/// S_k^(0); at index i >= 1 it is S_k^(i-1) - S_k^(i).
pub fn p_element(space: &GradedSpace, i: usize, k: usize) -> Result<ShuffleElement> {
    space.check_label(i)?;
    let last = space.dim() - 1;
    if i == 0 {
        let wrapped = s_element(space, last, k)?.scale(q_pow_fn(k as i64));
        wrapped.add(&s_element(space, 0, k)?.neg())
    } else {
        s_element(space, i - 1, k)?.add(&s_element(space, i, k)?.neg())
    }
}

/// S with the wrap-around alias: index -1 means q^k S^(last).
pub fn s_element_aliased(space: &GradedSpace, i: i64, k: usize) -> Result<ShuffleElement> {
    if i < 0 {
        Ok(s_element(space, space.dim() - 1, k)?.scale(q_pow_fn(k as i64)))
    } else {
        s_element(space, i as usize, k)
    }
}

/// The diagonal word sum: sum over words with multiplicity vector kappa
/// of the corresponding tensor products of diagonal units.
pub fn diag_word_sum(space: &GradedSpace, kappa: &[u32], tag: AlgebraTag) -> Result<ShuffleElement> {
    if kappa.len() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    let n: u32 = kappa.iter().sum();
    let k = n as usize;
    if k == 0 {
        return Ok(unit_element(space, tag));
    }
    let space2 = space.clone();
    let kappa = kappa.to_vec();
    let fam = TensorFamily::new(
        space.clone(),
        k,
        true,
        1,
        Arc::new(move |pt, _zs| {
            let mut acc = Tensor::zeros(space2.clone(), k, pt.order);
            let mut word = vec![0usize; k];
            loop {
                let mut counts = vec![0u32; space2.dim()];
                for &w in &word {
                    counts[w] += 1;
                }
                if counts == kappa {
                    let mut t = Tensor::matrix_unit(space2.clone(), word[0], word[0], pt.order)?;
                    for &w in &word[1..] {
                        t = t.kron(&Tensor::matrix_unit(space2.clone(), w, w, pt.order)?)?;
                    }
                    acc = acc.add(&t)?;
                }
                // next word
                let mut pos = k;
                while pos > 0 {
                    word[pos - 1] += 1;
                    if word[pos - 1] < space2.dim() {
                        break;
                    }
                    word[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
            Ok(acc)
        }),
    );
    Ok(ShuffleElement::new(fam, tag).with_claims(true, true))
}

/// All multiplicity vectors of total weight n.
pub fn compositions_of(n: u32, dim: usize) -> Vec<Vec<u32>> {
    fn rec(n: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=n {
            cur.push(v);
            rec(n - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, dim, &mut Vec::new(), &mut out);
    out
}

/// The twisted-trace element of size N, expanded per twist monomial:
/// the u^kappa coefficient is the trace map applied to the matching
/// diagonal word sum.
pub fn z_n_trace(space: &GradedSpace, n: usize) -> Result<Vec<(UMono, ShuffleElement)>> {
    let dim = space.dim();
    let mut out = Vec::new();
    for kappa in compositions_of(n as u32, dim) {
        let x = diag_word_sum(space, &kappa, AlgebraTag::Prime)?;
        out.push((UMono(kappa), psi(&x)));
    }
    Ok(out)
}

/// The generating series of the twisted traces up to order N.
pub fn z_series(space: &GradedSpace, order: usize) -> Result<ElementSeries> {
    let mut s = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for n in 0..=order {
        for (mono, elem) in z_n_trace(space, n)? {
            s.add_term(n, mono, elem)?;
        }
    }
    Ok(s)
}

fn int_fn(v: i64) -> ScalarFn {
    Arc::new(move |pt| Ok(JetScalar::from_int(v, pt.order)))
}

/// Series of diagonal powers: sum_k H_k^(i) x^k.
pub fn h_series(space: &GradedSpace, i: usize, order: usize) -> Result<ElementSeries> {
    let dim = space.dim();
    let mut s = ElementSeries::unit(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        s.add_term(k, UMono::zero(dim), h_element(space, i, k, AlgebraTag::Plus)?)?;
    }
    Ok(s)
}

/// The exponential form of the diagonal-power series:
/// exp( sum_k P_k^(i) (-1)^(k-1) / k x^k ).
pub fn h_series_expected(space: &GradedSpace, i: usize, order: usize) -> Result<ElementSeries> {
    let dim = space.dim();
    let mut arg = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let coeff = Coefficient::from_int(sign).mul(&Coefficient::from_int(k as i64).inv()?);
        let p = p_element(space, i, k)?;
        let c = coeff.clone();
        arg.add_term(
            k,
            UMono::zero(dim),
            p.scale(Arc::new(move |pt| Ok(JetScalar::constant(c.clone(), pt.order)))),
        )?;
    }
    arg.exp(&shuffle_product)
}

/// LHS of the trace-map generating identity: sum_k psi[H'_k^(j)] x^k.
pub fn psi_h_series(space: &GradedSpace, j: usize, order: usize) -> Result<ElementSeries> {
    let dim = space.dim();
    let mut s = ElementSeries::unit(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let h = h_element(space, j, k, AlgebraTag::Prime)?;
        s.add_term(k, UMono::zero(dim), psi(&h))?;
    }
    Ok(s)
}

/// Power-sum form of the trace-map series: exp of
/// eps_j^k/k (t^(eps_j k/2) - q^(k [i=j]) t^(-eps_j k/2)) / (1 - q^k)
/// q^(k [i>j]) P_k^(i) x^k summed over k and i.
pub fn psi_h_series_expected_p(
    space: &GradedSpace,
    j: usize,
    order: usize,
) -> Result<ElementSeries> {
    let dim = space.dim();
    let eps_j = space.eps(j) as i64;
    let mut arg = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        for i in 0..dim {
            let kk = k as i64;
            let delta_eq = i == j;
            let delta_gt = i > j;
            let coeff: ScalarFn = Arc::new(move |pt| {
                let sign = JetScalar::from_int(if eps_j == 1 || k % 2 == 0 { 1 } else { -1 }, pt.order);
                let tpos = pt.t_half_pow(eps_j * kk)?;
                let tneg = pt.t_half_pow(-eps_j * kk)?;
                let qk = pt.q.pow(kk)?;
                let head = if delta_eq { tpos.sub(&qk.mul(&tneg)) } else { tpos.sub(&tneg) };
                let den = JetScalar::one(pt.order).sub(&qk);
                let shift = if delta_gt { qk.clone() } else { JetScalar::one(pt.order) };
                let inv_k = JetScalar::from_int(kk, pt.order).inv()?;
                Ok(sign.mul(&head).div(&den)?.mul(&shift).mul(&inv_k))
            });
            let p = p_element(space, i, k)?;
            arg.add_term(k, UMono::zero(dim), p.scale(coeff))?;
        }
    }
    arg.exp(&shuffle_product)
}

/// S-form of the trace-map series: exp of
/// x^k/k eps_j^k (t^(-eps_j k/2) S_k^(j-1) - t^(eps_j k/2) S_k^(j)).
pub fn psi_h_series_expected_s(
    space: &GradedSpace,
    j: usize,
    order: usize,
) -> Result<ElementSeries> {
    let dim = space.dim();
    let eps_j = space.eps(j) as i64;
    let mut arg = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let kk = k as i64;
        let sign = if eps_j == 1 || k % 2 == 0 { 1 } else { -1 };
        let lower = s_element_aliased(space, j as i64 - 1, k)?;
        let upper = s_element(space, j, k)?;
        let c_low: ScalarFn = {
            Arc::new(move |pt: &EvalPoint| {
                Ok(JetScalar::from_int(sign, pt.order)
                    .mul(&pt.t_half_pow(-eps_j * kk)?)
                    .mul(&JetScalar::from_int(kk, pt.order).inv()?))
            })
        };
        let c_up: ScalarFn = {
            Arc::new(move |pt: &EvalPoint| {
                Ok(JetScalar::from_int(-sign, pt.order)
                    .mul(&pt.t_half_pow(eps_j * kk)?)
                    .mul(&JetScalar::from_int(kk, pt.order).inv()?))
            })
        };
        arg.add_term(k, UMono::zero(dim), lower.scale(c_low))?;
        arg.add_term(k, UMono::zero(dim), upper.scale(c_up))?;
    }
    arg.exp(&shuffle_product)
}

/// The shuffle-exponential form of the twisted-trace series:
/// exp( sum_k v^k/k sum_i (w_(i+1)^k - t^(eps_i k) w_i^k) S_k^(i) )
/// with w_i = t^(-eps_i/2) eps_i u_i and w after the last index
/// wrapping to q w_1. Twist monomials are tracked exactly.
pub fn z_series_expected(space: &GradedSpace, order: usize) -> Result<ElementSeries> {
    let dim = space.dim();
    let mut arg = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let kk = k as i64;
        for i in 0..dim {
            let s = s_element(space, i, k)?;
            // w_{i+1}^k part: u-monomial at label i+1 (wrapping to 0 with q^k)
            let next = (i + 1) % dim;
            let wrap = i + 1 == dim;
            let eps_next = space.eps(next) as i64;
            let c_next: ScalarFn = Arc::new(move |pt: &EvalPoint| {
                let sign = if eps_next == 1 || k % 2 == 0 { 1 } else { -1 };
                let mut v = JetScalar::from_int(sign, pt.order)
                    .mul(&pt.t_half_pow(-eps_next * kk)?)
                    .mul(&JetScalar::from_int(kk, pt.order).inv()?);
                if wrap {
                    v = v.mul(&pt.q.pow(kk)?);
                }
                Ok(v)
            });
            arg.add_term(
                k,
                UMono::single(dim, next, k as u32),
                s.scale(c_next),
            )?;
            // - t^(eps_i k) w_i^k part: the scalar is
            // -eps_i^k t^(eps_i k) t^(-eps_i k/2) / k = -eps_i^k t^(eps_i k/2) / k
            let eps_i = space.eps(i) as i64;
            let c_here: ScalarFn = Arc::new(move |pt: &EvalPoint| {
                let sign = if eps_i == 1 || k % 2 == 0 { 1 } else { -1 };
                Ok(JetScalar::from_int(-sign, pt.order)
                    .mul(&pt.t_half_pow(eps_i * kk)?)
                    .mul(&JetScalar::from_int(kk, pt.order).inv()?))
            });
            arg.add_term(k, UMono::single(dim, i, k as u32), s.scale(c_here))?;
        }
    }
    arg.exp(&shuffle_product)
}

/// The product-of-series route to the twisted traces: the series
/// product over j of sum_k (v u_j)^k psi[H'_k^(j)].
pub fn z_series_via_factors(space: &GradedSpace, order: usize) -> Result<ElementSeries> {
    let dim = space.dim();
    let mut acc = ElementSeries::unit(space.clone(), order, AlgebraTag::Plus);
    for j in 0..dim {
        let mut factor = ElementSeries::unit(space.clone(), order, AlgebraTag::Plus);
        for k in 1..=order {
            let h = h_element(space, j, k, AlgebraTag::Prime)?;
            factor.add_term(k, UMono::single(dim, j, k as u32), psi(&h))?;
        }
        acc = acc.mul(&factor, &shuffle_product)?;
    }
    Ok(acc)
}

/// Closed form of the evaluation homomorphism on trace images of
/// diagonal powers (labels 0-based).
pub fn alpha_closed_form(space: &GradedSpace, i: usize, j: usize, k: usize) -> Result<ScalarFn> {
    space.check_label(i)?;
    space.check_label(j)?;
    let eps_j = space.eps(j) as i64;
    let same = i == j;
    let above = i > j;
    Ok(Arc::new(move |pt: &EvalPoint| {
        let mut acc = JetScalar::one(pt.order);
        for l in 1..=k as i64 {
            let shift = if same { l } else { l - 1 };
            let num = pt.t_half_pow(eps_j)?.sub(&pt.q.pow(shift)?.mul(&pt.t_half_pow(-eps_j)?));
            let den = JetScalar::one(pt.order).sub(&pt.q.pow(l)?);
            let term = JetScalar::from_int(eps_j, pt.order).mul(&num).div(&den)?;
            acc = acc.mul(&term);
        }
        if !same && above {
            acc = acc.mul(&pt.q.pow(k as i64)?);
        }
        Ok(acc)
    }))
}

/// Embedding data reproducing the trace map on a one-dimensional
/// subspace of the space itself (ambient = V, V' the line at label j).
pub fn embedding_line_in_self(space: &GradedSpace, j: usize) -> Result<EmbeddingSpec> {
    space.check_label(j)?;
    let line = GradedSpace::with_grading(vec![space.eps(j)])?;
    // iota covers every label, iota' repeats label j: the covering
    // requirement holds because iota alone is onto
    EmbeddingSpec::new(space.clone(), line, space.clone(), (0..space.dim()).collect(), vec![j])
}

/// Embedding data for one extra label of the chosen grading inserted at
/// 0-based position `a` (the ambient space has dimension dim + 1).
pub fn embedding_one_extra(space: &GradedSpace, a: usize, eps_new: i8) -> Result<EmbeddingSpec> {
    if a > space.dim() {
        return Err(Error::Config("insertion position out of range".into()));
    }
    let mut eps: Vec<i8> = space.grading().to_vec();
    eps.insert(a, eps_new);
    let ambient = GradedSpace::with_grading(eps)?;
    let iota: Vec<usize> = (0..space.dim()).map(|i| if i < a { i } else { i + 1 }).collect();
    let line = GradedSpace::with_grading(vec![eps_new])?;
    EmbeddingSpec::new(space.clone(), line, ambient, iota, vec![a])
}

/// Embedding data for a boson-fermion pair inserted at 0-based position
/// `a` (the ambient space has dimension dim + 2, V' is the 2-dim space
/// with grading (+1, -1)).
pub fn embedding_pair_inserted(space: &GradedSpace, a: usize) -> Result<EmbeddingSpec> {
    if a > space.dim() {
        return Err(Error::Config("insertion position out of range".into()));
    }
    let mut eps: Vec<i8> = space.grading().to_vec();
    eps.insert(a, -1);
    eps.insert(a, 1);
    let ambient = GradedSpace::with_grading(eps)?;
    let iota: Vec<usize> = (0..space.dim()).map(|i| if i < a { i } else { i + 2 }).collect();
    let pair = GradedSpace::standard(1, 1);
    EmbeddingSpec::new(space.clone(), pair, ambient, iota, vec![a, a + 1])
}

/// The weighted diagonal sum feeding the trace formula for S: over
/// words in the two inserted labels, weight (-1)^m m with m the
/// multiplicity of the fermionic label.
pub fn weighted_pair_sum(k: usize) -> Result<ShuffleElement> {
    let pair = GradedSpace::standard(1, 1);
    let fam = TensorFamily::new(
        pair.clone(),
        k,
        true,
        1,
        Arc::new(move |pt, _zs| {
            let pair = GradedSpace::standard(1, 1);
            let mut acc = Tensor::zeros(pair.clone(), k, pt.order);
            for word in 0..(1usize << k) {
                let m = (word as u32).count_ones() as i64;
                if m == 0 {
                    continue;
                }
                let weight = if m % 2 == 0 { m } else { -m };
                let mut t = Tensor::matrix_unit(pair.clone(), (word >> (k - 1)) & 1, (word >> (k - 1)) & 1, pt.order)?;
                for pos in 1..k {
                    let lbl = (word >> (k - 1 - pos)) & 1;
                    t = t.kron(&Tensor::matrix_unit(pair.clone(), lbl, lbl, pt.order)?)?;
                }
                acc = acc.add(&t.scale(&JetScalar::from_int(weight, pt.order)))?;
            }
            Ok(acc)
        }),
    );
    Ok(ShuffleElement::new(fam, AlgebraTag::Prime))
}

/// The trace formula for the recursive family: the projected trace of
/// the weighted pair sum through the pair insertion at position i + 1,
/// scaled by -1/(t^(-k/2) - t^(k/2)). Must agree with `s_element`.
pub fn s_element_via_trace(space: &GradedSpace, i: usize, k: usize) -> Result<ShuffleElement> {
    space.check_label(i)?;
    let spec = embedding_pair_inserted(space, i + 1)?;
    let x = weighted_pair_sum(k)?;
    let mapped = psi_tilde(&x, &spec)?;
    let kk = k as i64;
    let scale: ScalarFn = Arc::new(move |pt: &EvalPoint| {
        let den = pt.t_half_pow(-kk)?.sub(&pt.t_half_pow(kk)?);
        JetScalar::one(pt.order).neg().div(&den)
    });
    Ok(mapped.scale(scale))
}

/// The generating identity behind the trace formula, at fixed k:
/// psi_tilde applied to sum_l (-1)^l l H'_(k-l)^(1) *' H'_l^(2) (primed
/// products in the two-label algebra) equals
/// -(t^(-k/2) - t^(k/2)) S_k^(a-1), for the pair inserted at position a.
pub fn s_trace_generating_identity_sides(
    space: &GradedSpace,
    a: usize,
    k: usize,
) -> Result<(ShuffleElement, ShuffleElement)> {
    if a == 0 || a > space.dim() {
        return Err(Error::Config("need 1 <= a <= dim for the unshifted identity".into()));
    }
    let spec = embedding_pair_inserted(space, a)?;
    let pair = GradedSpace::standard(1, 1);
    let mut lhs_inner: Option<ShuffleElement> = None;
    for l in 0..=k {
        let h1 = h_element(&pair, 0, k - l, AlgebraTag::Prime)?;
        let h2 = h_element(&pair, 1, l, AlgebraTag::Prime)?;
        let prod = shuffle_product_prime(&h1, &h2)?;
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let weight = sign * l as i64;
        if weight == 0 {
            continue;
        }
        let term = prod.scale(int_fn(weight));
        lhs_inner = Some(match lhs_inner {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    let lhs = psi_tilde(&lhs_inner.ok_or(Error::Config("k must be positive".into()))?, &spec)?;
    let kk = k as i64;
    let rhs = s_element(space, a - 1, k)?.scale(Arc::new(move |pt: &EvalPoint| {
        Ok(pt.t_half_pow(-kk)?.sub(&pt.t_half_pow(kk)?).neg())
    }));
    Ok((lhs, rhs))
}

/// Series form of the one-extra-label trace map: psi_tilde of the
/// scalar diagonal powers, expected to equal
/// exp( sum_k x^k/k eps'^(k+1) (t^(-k/2) - t^(k/2)) S_k^(a-1) ).
pub fn psi_tilde_one_extra_sides(
    space: &GradedSpace,
    a: usize,
    eps_new: i8,
    order: usize,
) -> Result<(ElementSeries, ElementSeries)> {
    if a == 0 || a > space.dim() {
        return Err(Error::Config("need 1 <= a <= dim".into()));
    }
    let dim = space.dim();
    let spec = embedding_one_extra(space, a, eps_new)?;
    let line = GradedSpace::with_grading(vec![eps_new])?;
    let mut lhs = ElementSeries::unit(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let h = h_element(&line, 0, k, AlgebraTag::Prime)?;
        lhs.add_term(k, UMono::zero(dim), psi_tilde(&h, &spec)?)?;
    }
    let mut arg = ElementSeries::zero(space.clone(), order, AlgebraTag::Plus);
    for k in 1..=order {
        let kk = k as i64;
        let sgn = if eps_new == 1 || (k + 1) % 2 == 0 { 1i64 } else { -1 };
        let s = s_element(space, a - 1, k)?;
        arg.add_term(
            k,
            UMono::zero(dim),
            s.scale(Arc::new(move |pt: &EvalPoint| {
                Ok(JetScalar::from_int(sgn, pt.order)
                    .mul(&pt.t_half_pow(-kk)?.sub(&pt.t_half_pow(kk)?))
                    .mul(&JetScalar::from_int(kk, pt.order).inv()?))
            })),
        )?;
    }
    Ok((lhs, arg.exp(&shuffle_product)?))
}
