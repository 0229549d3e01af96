//! Graded R-matrix constructors and their structured products.
//!
//! Conventions, fixed project-wide:
//! * entries of the braided matrix are read as `<a,c| Rc(z) |b,d>` with
//!   row = output word, column = input word;
//! * `Rc_i` acts in adjacent slots (i, i+1) with argument
//!   (variable carried by slot i+1)/(variable carried by slot i);
//! * a braid word built from adjacent crossings tracks the arrangement
//!   of variables, and the operator attached to a permutation depends
//!   only on the final arrangement (checked, not assumed).

use crate::error::Error;
use crate::jet::JetScalar;
use crate::perm::Perm;
use crate::point::EvalPoint;
use crate::space::GradedSpace;
use crate::tensor::Tensor;
use crate::Result;

/// The unitarity normalizer f(x) = (1 - t x)(1 - x/t) / (1 - x)^2.
pub fn normalizer_f(pt: &EvalPoint, x: &JetScalar) -> Result<JetScalar> {
    let t = pt.t();
    let one = JetScalar::one(pt.order);
    let num = one.sub(&t.mul(x)).mul(&one.sub(&x.div(&t)?));
    let den = one.sub(x);
    if den.is_zero() {
        return Err(Error::PoleAtArgument);
    }
    num.div(&den.mul(&den))
}

/// The permutation operator P on V (x) V.
pub fn perm_p(space: &GradedSpace, order: usize) -> Tensor {
    let d = space.dim();
    let mut p = Tensor::zeros(space.clone(), 2, order);
    for a in 0..d {
        for b in 0..d {
            p.set(a * d + b, b * d + a, JetScalar::one(order));
        }
    }
    p
}

/// The graded R-matrix: diagonal entries
/// eps_i (t^(-eps_i/2) - z t^(eps_i/2)) / (1 - z) on i = j, entry 1 on
/// E_ii (x) E_jj with i != j, and exchange entries
/// (t^(-1/2) - t^(1/2)) z^(i<j) / (1 - z) on E_ij (x) E_ji.
pub fn r_matrix(pt: &EvalPoint, space: &GradedSpace, z: &JetScalar) -> Result<Tensor> {
    let d = space.dim();
    let order = pt.order;
    let one = JetScalar::one(order);
    let denom = one.sub(z);
    if denom.is_zero() {
        return Err(Error::PoleAtArgument);
    }
    let denom_inv = denom.inv()?;
    let th = &pt.t_half;
    let th_inv = th.inv()?;
    let exch = th_inv.sub(th).mul(&denom_inv);
    let mut r = Tensor::zeros(space.clone(), 2, order);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            if i == j {
                let e = space.eps(i) as i64;
                let (tp, tm) = (pt.t_half_pow(e)?, pt.t_half_pow(-e)?);
                let num = tm.sub(&z.mul(&tp));
                let sign = JetScalar::from_int(e, order);
                r.set(row, row, sign.mul(&num).mul(&denom_inv));
            } else {
                r.set(row, row, one.clone());
                // exchange entry: row (i,j), column (j,i)
                let col = j * d + i;
                let v = if i < j { exch.mul(z) } else { exch.clone() };
                r.set(row, col, v);
            }
        }
    }
    Ok(r)
}

/// Rc(z) = R(z) P.
pub fn r_check(pt: &EvalPoint, space: &GradedSpace, z: &JetScalar) -> Result<Tensor> {
    r_matrix(pt, space, z)?.matmul(&perm_p(space, pt.order))
}

/// The diagonal twist D = diag{1, t^-1, ..., t^(-n+1), (-1)t^(-n+1),
/// (-t)t^(-n+1), ...}. Only defined on spaces with bosonic labels
/// sorted first.
pub fn d_twist(pt: &EvalPoint, space: &GradedSpace) -> Result<Tensor> {
    if !space.is_sorted_standard() {
        return Err(Error::GradingMismatch);
    }
    let n = space.bosonic() as i64;
    let mut diag = Vec::with_capacity(space.dim());
    for i in 0..space.dim() as i64 {
        let v = if i < n {
            pt.t_pow(-i)?
        } else {
            let f = i - n;
            pt.t_pow(f - n + 1)?.neg()
        };
        diag.push(v);
    }
    Tensor::diagonal(space.clone(), &diag)
}

/// Rc_bullet(z) = (D (x) id) Rc(z t^(m-n)) (id (x) D^-1).
pub fn r_check_bullet(pt: &EvalPoint, space: &GradedSpace, z: &JetScalar) -> Result<Tensor> {
    let shift = pt.t_pow(space.fermionic() as i64 - space.bosonic() as i64)?;
    let core = r_check(pt, space, &z.mul(&shift))?;
    let d = d_twist(pt, space)?;
    let d_inv = invert_diagonal(&d)?;
    core.apply_small_left(&d, &[0])?.apply_small_right(&d_inv, &[1])
}

fn invert_diagonal(t: &Tensor) -> Result<Tensor> {
    let mut out = t.clone();
    for i in 0..t.side() {
        let v = t.get(i, i).inv()?;
        out.set(i, i, v);
    }
    Ok(out)
}

/// Rc(z)^-1 = Rc(1/z) / f(z); singular when the normalizer vanishes
/// (z = t or z = 1/t).
pub fn r_check_inverse(pt: &EvalPoint, space: &GradedSpace, z: &JetScalar) -> Result<Tensor> {
    let f = normalizer_f(pt, z)?;
    if f.is_zero() {
        return Err(Error::SingularAtArgument);
    }
    let rc = r_check(pt, space, &z.inv()?)?;
    Ok(rc.scale(&f.inv()?))
}

fn two_site(pt: &EvalPoint, space: &GradedSpace, z: &JetScalar, bullet: bool) -> Result<Tensor> {
    if bullet {
        r_check_bullet(pt, space, z)
    } else {
        r_check(pt, space, z)
    }
}

/// Rc acting in adjacent slots (slot, slot+1) of `total` factors.
pub fn r_check_embedded(
    pt: &EvalPoint,
    space: &GradedSpace,
    slot: usize,
    total: usize,
    z: &JetScalar,
) -> Result<Tensor> {
    if slot + 1 >= total {
        return Err(Error::SlotOutOfRange { slot, total });
    }
    r_check(pt, space, z)?.place_in_slots(&[slot, slot + 1], total)
}

/// Rc acting in slots (a, b), a != b, of `total` factors.
pub fn r_check_pair(
    pt: &EvalPoint,
    space: &GradedSpace,
    a: usize,
    b: usize,
    total: usize,
    z: &JetScalar,
) -> Result<Tensor> {
    if a >= total || b >= total || a == b {
        return Err(Error::SlotOutOfRange { slot: a.max(b), total });
    }
    r_check(pt, space, z)?.place_in_slots(&[a, b], total)
}

/// Plain R acting in slots (a, b) of `total` factors.
pub fn r_pair(
    pt: &EvalPoint,
    space: &GradedSpace,
    a: usize,
    b: usize,
    total: usize,
    z: &JetScalar,
) -> Result<Tensor> {
    if a >= total || b >= total || a == b {
        return Err(Error::SlotOutOfRange { slot: a.max(b), total });
    }
    r_matrix(pt, space, z)?.place_in_slots(&[a, b], total)
}

/// R(z)^-1 = R_21(1/z)/f(z), as a 2-site tensor on slots (a, b).
pub fn r_pair_inverse(
    pt: &EvalPoint,
    space: &GradedSpace,
    a: usize,
    b: usize,
    total: usize,
    z: &JetScalar,
) -> Result<Tensor> {
    let f = normalizer_f(pt, z)?;
    if f.is_zero() {
        return Err(Error::SingularAtArgument);
    }
    // R_21(x) placed on (a, b) is R(x) placed on (b, a)
    let r = r_matrix(pt, space, &z.inv()?)?.scale(&f.inv()?);
    r.place_in_slots(&[b, a], total)
}

/// A braided operator for a target arrangement together with the slot
/// and argument of every crossing used to build it.
struct BraidBuild {
    tensor: Tensor,
    crossings: Vec<(usize, JetScalar)>,
}

fn build_braid(
    pt: &EvalPoint,
    space: &GradedSpace,
    word: &[usize],
    vars: &[JetScalar],
    bullet: bool,
) -> Result<BraidBuild> {
    let total = vars.len();
    let mut arrangement: Vec<usize> = (0..total).collect();
    let mut tensor = Tensor::identity(space.clone(), total, pt.order);
    let mut crossings = Vec::with_capacity(word.len());
    for &i in word {
        if i + 1 >= total {
            return Err(Error::SlotOutOfRange { slot: i, total });
        }
        let arg = vars[arrangement[i + 1]].div(&vars[arrangement[i]])?;
        let factor = two_site(pt, space, &arg, bullet)?;
        tensor = tensor.apply_small_left(&factor, &[i, i + 1])?;
        arrangement.swap(i, i + 1);
        crossings.push((i, arg));
    }
    Ok(BraidBuild { tensor, crossings })
}

/// Rc_sigma over the given variable values, built from the canonical
/// reduced word of sigma (bubble-sorted, deterministic).
pub fn r_check_sigma(
    pt: &EvalPoint,
    space: &GradedSpace,
    sigma: &Perm,
    vars: &[JetScalar],
) -> Result<Tensor> {
    if sigma.len() != vars.len() {
        return Err(Error::BadPermutation { arity: vars.len() });
    }
    let word = sigma.canonical_reduced_word();
    Ok(build_braid(pt, space, &word, vars, false)?.tensor)
}

/// Rc_sigma from an explicit reduced word (rejects non-reduced words).
pub fn r_check_sigma_word(
    pt: &EvalPoint,
    space: &GradedSpace,
    sigma: &Perm,
    word: &[usize],
    vars: &[JetScalar],
) -> Result<Tensor> {
    sigma.check_reduced(word)?;
    Ok(build_braid(pt, space, word, vars, false)?.tensor)
}

/// Inverse of Rc_sigma: the reversed word with each crossing replaced
/// by its unitarity inverse.
pub fn r_check_sigma_inverse(
    pt: &EvalPoint,
    space: &GradedSpace,
    sigma: &Perm,
    vars: &[JetScalar],
) -> Result<Tensor> {
    let word = sigma.canonical_reduced_word();
    let built = build_braid(pt, space, &word, vars, false)?;
    let total = vars.len();
    // fwd = f_L ... f_1 (first crossing rightmost), so the inverse is
    // f_1^-1 ... f_L^-1: invert each crossing and keep the list order
    // while accumulating on the right.
    let mut tensor = Tensor::identity(space.clone(), total, pt.order);
    for (slot, arg) in built.crossings.iter() {
        let f = normalizer_f(pt, arg)?;
        if f.is_zero() {
            return Err(Error::SingularAtArgument);
        }
        let inv = r_check(pt, space, &arg.inv()?)?.scale(&f.inv()?);
        tensor = tensor.apply_small_right(&inv, &[*slot, *slot + 1])?;
    }
    Ok(tensor)
}

/// The crossing block Rc_{omega^l}(z, w) =
/// prod_{j=1..k} prod_{i=1..l} Rc_{l+j-i}(w_{l-i+1} / z_j), the
/// double-product contraction that crosses all w-lines over all
/// z-lines. With `bullet` every factor is Rc_bullet.
pub fn crossing_block(
    pt: &EvalPoint,
    space: &GradedSpace,
    zs: &[JetScalar],
    ws: &[JetScalar],
    bullet: bool,
) -> Result<Tensor> {
    let total = zs.len() + ws.len();
    let id = Tensor::identity(space.clone(), total, pt.order);
    crossing_block_apply(pt, space, zs, ws, bullet, id, MulSide::Right)
}

/// Which side of an existing tensor a structured product multiplies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MulSide {
    Left,
    Right,
}

/// Multiplies `m` by the crossing block without materializing it:
/// `Left` computes block . m, `Right` computes m . block.
pub fn crossing_block_apply(
    pt: &EvalPoint,
    space: &GradedSpace,
    zs: &[JetScalar],
    ws: &[JetScalar],
    bullet: bool,
    m: Tensor,
    side: MulSide,
) -> Result<Tensor> {
    let (k, l) = (zs.len(), ws.len());
    let mut factors = Vec::with_capacity(k * l);
    for j in 1..=k {
        for i in 1..=l {
            let slot = l + j - i; // 1-based
            let arg = ws[l - i].div(&zs[j - 1])?;
            factors.push((slot - 1, arg));
        }
    }
    let mut acc = m;
    match side {
        // block . m = F_1 (F_2 (... (F_last m)))
        MulSide::Left => {
            for (slot, arg) in factors.iter().rev() {
                let f = two_site(pt, space, arg, bullet)?;
                acc = acc.apply_small_left(&f, &[*slot, *slot + 1])?;
            }
        }
        // m . block = ((m F_1) F_2) ...
        MulSide::Right => {
            for (slot, arg) in factors.iter() {
                let f = two_site(pt, space, arg, bullet)?;
                acc = acc.apply_small_right(&f, &[*slot, *slot + 1])?;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Coefficient;
    use crate::point::{sample_point, SampleSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt_for(dim: usize, arity: usize, seed: u64) -> EvalPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_point(&mut rng, SampleSpec::new(dim, arity)).unwrap()
    }

    fn fresh_scalar(seed: u64) -> JetScalar {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        JetScalar::constant(Coefficient::sample_nonzero(&mut rng), 6)
    }

    #[test]
    fn bosonic_diagonal_entry() {
        let s = GradedSpace::standard(2, 0);
        let pt = pt_for(2, 1, 10);
        let z = fresh_scalar(11);
        let r = r_matrix(&pt, &s, &z).unwrap();
        let one = JetScalar::one(pt.order);
        let expect = pt
            .t_half_pow(-1)
            .unwrap()
            .sub(&z.mul(&pt.t_half))
            .div(&one.sub(&z))
            .unwrap();
        let idx = r.rank(&[0, 0]);
        assert_eq!(r.get(idx, idx), &expect);
    }

    #[test]
    fn fermionic_diagonal_entry() {
        let s = GradedSpace::standard(1, 1);
        let pt = pt_for(2, 1, 12);
        let z = fresh_scalar(13);
        let r = r_matrix(&pt, &s, &z).unwrap();
        let one = JetScalar::one(pt.order);
        // label 1 is fermionic: (z t^(-1/2) - t^(1/2)) / (1 - z)
        let expect = z
            .mul(&pt.t_half_pow(-1).unwrap())
            .sub(&pt.t_half)
            .div(&one.sub(&z))
            .unwrap();
        let idx = r.rank(&[1, 1]);
        assert_eq!(r.get(idx, idx), &expect);
    }

    #[test]
    fn r_at_zero_is_triangular_with_graded_diagonal() {
        // read off by jet evaluation at z = eps
        let s = GradedSpace::standard(1, 1);
        let pt = pt_for(2, 1, 14);
        let z = JetScalar::eps(pt.order);
        let r = r_matrix(&pt, &s, &z).unwrap();
        for i in 0..2 {
            let idx = r.rank(&[i, i]);
            let lead = r.get(idx, idx).coefficient_at(0).unwrap();
            let e = s.eps(i) as i64;
            let expect = pt
                .t_half_pow(-e)
                .unwrap()
                .scale(&Coefficient::from_int(e))
                .as_plain()
                .unwrap();
            assert_eq!(lead, expect);
        }
        // exchange entry with i < j vanishes at z = 0, with i > j it does not
        let lo = r.get(r.rank(&[0, 1]), r.rank(&[1, 0]));
        assert_eq!(lo.coefficient_at(0).unwrap(), Coefficient::zero());
        let hi = r.get(r.rank(&[1, 0]), r.rank(&[0, 1]));
        assert!(!hi.coefficient_at(0).unwrap().is_zero());
    }

    #[test]
    fn pole_at_argument_one() {
        let s = GradedSpace::standard(2, 0);
        let pt = pt_for(2, 1, 15);
        assert!(matches!(
            r_matrix(&pt, &s, &JetScalar::one(pt.order)),
            Err(Error::PoleAtArgument)
        ));
    }

    #[test]
    fn yang_baxter_all_small_spaces() {
        for (n, m) in [(1usize, 0usize), (2, 0), (1, 1), (2, 1), (3, 0)] {
            let s = GradedSpace::standard(n, m);
            let pt = pt_for(n + m, 3, 16 + (n * 10 + m) as u64);
            let (x, y, z) = (&pt.zs[0], &pt.zs[1], &pt.zs[2]);
            // Rc_1(z/y) Rc_2(z/x) Rc_1(y/x) = Rc_2(y/x) Rc_1(z/x) Rc_2(z/y)
            let lhs = r_check_embedded(&pt, &s, 0, 3, &z.div(y).unwrap())
                .unwrap()
                .matmul(&r_check_embedded(&pt, &s, 1, 3, &z.div(x).unwrap()).unwrap())
                .unwrap()
                .matmul(&r_check_embedded(&pt, &s, 0, 3, &y.div(x).unwrap()).unwrap())
                .unwrap();
            let rhs = r_check_embedded(&pt, &s, 1, 3, &y.div(x).unwrap())
                .unwrap()
                .matmul(&r_check_embedded(&pt, &s, 0, 3, &z.div(x).unwrap()).unwrap())
                .unwrap()
                .matmul(&r_check_embedded(&pt, &s, 1, 3, &z.div(y).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "YB failed for ({n},{m})");
        }
    }

    #[test]
    fn unitarity_and_inverse() {
        let s = GradedSpace::standard(2, 1);
        let pt = pt_for(3, 2, 21);
        let x = &pt.zs[0];
        let y = &pt.zs[1];
        let ratio = x.div(y).unwrap();
        let prod = r_check(&pt, &s, &ratio)
            .unwrap()
            .matmul(&r_check(&pt, &s, &ratio.inv().unwrap()).unwrap())
            .unwrap();
        let f = normalizer_f(&pt, &ratio).unwrap();
        assert_eq!(prod, Tensor::identity(s.clone(), 2, pt.order).scale(&f));

        let inv = r_check_inverse(&pt, &s, &ratio).unwrap();
        let id = r_check(&pt, &s, &ratio).unwrap().matmul(&inv).unwrap();
        assert_eq!(id, Tensor::identity(s.clone(), 2, pt.order));
    }

    #[test]
    fn scalar_case_inverse_is_reciprocal() {
        let s = GradedSpace::standard(1, 0);
        let pt = pt_for(1, 1, 22);
        let z = fresh_scalar(23);
        let rc = r_check(&pt, &s, &z).unwrap();
        let one = JetScalar::one(pt.order);
        let expect = pt.t_half_pow(-1).unwrap().sub(&z.mul(&pt.t_half)).div(&one.sub(&z)).unwrap();
        assert_eq!(rc.get(0, 0), &expect);
        let inv = r_check_inverse(&pt, &s, &z).unwrap();
        assert_eq!(inv.get(0, 0), &expect.inv().unwrap());
    }

    #[test]
    fn residue_at_coincident_arguments() {
        // Res_{x=y} Rc(x/y) = (t^(1/2) - t^(-1/2)) id (x) id, computed
        // entrywise with the dz/z convention along x = y(1+eps).
        for (n, m) in [(1usize, 0usize), (2, 0), (1, 1), (2, 1), (3, 0)] {
            let s = GradedSpace::standard(n, m);
            let pt = pt_for(n + m, 1, 30 + (n * 7 + m) as u64);
            let y = pt.zs[0].as_plain().unwrap();
            let curve = JetScalar::one_plus_eps_pow(&y, 1, pt.order);
            let arg = curve.div(&pt.zs[0]).unwrap();
            let rc = r_check(&pt, &s, &arg).unwrap();
            let corr = JetScalar::one_plus_eps_pow(&Coefficient::one(), 1, pt.order);
            let coeff = pt.t_half.sub(&pt.t_half_pow(-1).unwrap());
            let expect = Tensor::identity(s.clone(), 2, pt.order).scale(&coeff);
            let mut got = Tensor::zeros(s.clone(), 2, pt.order);
            for r in 0..rc.side() {
                for c in 0..rc.side() {
                    let e = rc.get(r, c).div(&corr).unwrap();
                    got.set(r, c, JetScalar::constant(e.coefficient_at(-1).unwrap(), pt.order));
                }
            }
            assert_eq!(got, expect, "residue failed for ({n},{m})");
        }
    }

    #[test]
    fn residue_convention_applied_entrywise() {
        // the residue operator applied entry by entry reproduces the
        // coincident-argument identity
        let s = GradedSpace::standard(2, 1);
        let pt = pt_for(3, 1, 320);
        let y = pt.zs[0].as_plain().unwrap();
        let coeff = pt.t_half.sub(&pt.t_half_pow(-1).unwrap());
        let d = s.dim();
        for a in 0..d * d {
            for b in 0..d * d {
                let got = crate::point::residue_dz_over_z(
                    |x| {
                        let rc = r_check(&pt, &s, &x.div(&pt.zs[0])?)?;
                        Ok(rc.get(a, b).clone())
                    },
                    &y,
                    pt.order,
                )
                .unwrap();
                let expect = if a == b { coeff.clone() } else { JetScalar::zero(pt.order) };
                assert_eq!(got, expect, "entry ({a},{b})");
            }
        }
    }

    #[test]
    fn crossing_unitarity_with_super_bullet() {
        for (n, m) in [(1usize, 0usize), (2, 0), (3, 0), (1, 1), (2, 1)] {
            let s = GradedSpace::standard(n, m);
            let pt = pt_for(n + m, 2, 40 + (n * 5 + m) as u64);
            let x = &pt.zs[0];
            let p = perm_p(&s, pt.order);
            let m1 = r_check_bullet(&pt, &s, x).unwrap().matmul(&p).unwrap();
            let m2 = p.matmul(&r_check(&pt, &s, &x.inv().unwrap()).unwrap()).unwrap();
            let lhs = m1
                .transpose_factor(1)
                .unwrap()
                .matmul(&m2.transpose_factor(1).unwrap())
                .unwrap();
            assert_eq!(lhs, Tensor::identity(s.clone(), 2, pt.order), "crossing failed ({n},{m})");
        }
    }

    #[test]
    fn traced_column_extraction_oracle() {
        // Tr_2[Rc(z)(id (x) E_jj)] read off the entries by hand:
        // eps_j (t^(-eps_j/2) - z t^(eps_j/2))/(1-z) on E_jj plus
        // (t^(-1/2) - t^(1/2)) z^(a<j) / (1-z) on every other E_aa
        for (n, m) in [(2usize, 0usize), (1, 1)] {
            let s = GradedSpace::standard(n, m);
            let pt = pt_for(n + m, 1, 300 + (n * 13 + m) as u64);
            let z = fresh_scalar(301 + (n + m) as u64);
            let one = JetScalar::one(pt.order);
            let denom_inv = one.sub(&z).inv().unwrap();
            for j in 0..s.dim() {
                let rc = r_check(&pt, &s, &z).unwrap();
                let proj = Tensor::matrix_unit(s.clone(), j, j, pt.order).unwrap();
                let with_proj = rc.apply_small_right(&proj, &[1]).unwrap();
                let traced = with_proj.partial_trace(&[1]).unwrap();
                let e = s.eps(j) as i64;
                let diag_j = JetScalar::from_int(e, pt.order)
                    .mul(&pt.t_half_pow(-e).unwrap().sub(&z.mul(&pt.t_half_pow(e).unwrap())))
                    .mul(&denom_inv);
                let h = pt.t_half_pow(-1).unwrap().sub(&pt.t_half);
                for a in 0..s.dim() {
                    let expect = if a == j {
                        diag_j.clone()
                    } else if a < j {
                        h.mul(&z).mul(&denom_inv)
                    } else {
                        h.mul(&denom_inv)
                    };
                    assert_eq!(traced.get(a, a), &expect, "traced entry ({a},{a}) j={j}");
                }
            }
        }
    }

    #[test]
    fn bullet_specializes_on_bosonic_spaces() {
        // with no fermionic labels the twist is diag(1, t^-1, ..) and
        // the spectral shift is t^(-n)
        let s = GradedSpace::standard(3, 0);
        let pt = pt_for(3, 1, 310);
        let d = d_twist(&pt, &s).unwrap();
        for i in 0..3i64 {
            assert_eq!(d.get(i as usize, i as usize), &pt.t_pow(-i).unwrap());
        }
        let z = fresh_scalar(311);
        let direct = r_check_bullet(&pt, &s, &z).unwrap();
        let d_inv = {
            let mut out = d.clone();
            for i in 0..3 {
                out.set(i, i, d.get(i, i).inv().unwrap());
            }
            out
        };
        let shifted = r_check(&pt, &s, &z.mul(&pt.t_pow(-3).unwrap())).unwrap();
        let manual = shifted
            .apply_small_left(&d, &[0])
            .unwrap()
            .apply_small_right(&d_inv, &[1])
            .unwrap();
        assert_eq!(direct, manual);
    }

    #[test]
    fn braid_well_defined_on_reduced_words() {
        let s = GradedSpace::standard(1, 1);
        let pt = pt_for(2, 3, 50);
        let longest = Perm::longest(3);
        let w1 = longest.canonical_reduced_word();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let mut w2 = longest.random_reduced_word(&mut rng);
        while w2 == w1 {
            w2 = longest.random_reduced_word(&mut rng);
        }
        let a = r_check_sigma_word(&pt, &s, &longest, &w1, &pt.zs).unwrap();
        let b = r_check_sigma_word(&pt, &s, &longest, &w2, &pt.zs).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_reduced_word_rejected() {
        let s = GradedSpace::standard(1, 0);
        let pt = pt_for(1, 3, 52);
        let sigma = Perm::adjacent(3, 0);
        assert!(matches!(
            r_check_sigma_word(&pt, &s, &sigma, &[0, 1, 0], &pt.zs),
            Err(Error::NonReducedWord { .. })
        ));
    }

    #[test]
    fn sigma_single_step_and_inverse() {
        let s = GradedSpace::standard(2, 0);
        let pt = pt_for(2, 2, 53);
        let sigma = Perm::adjacent(2, 0);
        let got = r_check_sigma(&pt, &s, &sigma, &pt.zs).unwrap();
        let expect = r_check(&pt, &s, &pt.zs[1].div(&pt.zs[0]).unwrap()).unwrap();
        assert_eq!(got, expect);

        let longest = Perm::longest(3);
        let pt3 = pt_for(2, 3, 54);
        let fwd = r_check_sigma(&pt3, &s, &longest, &pt3.zs).unwrap();
        let inv = r_check_sigma_inverse(&pt3, &s, &longest, &pt3.zs).unwrap();
        assert_eq!(fwd.matmul(&inv).unwrap(), Tensor::identity(s.clone(), 3, pt3.order));
    }

    #[test]
    fn pair_form_is_conjugated_adjacent_form() {
        let s = GradedSpace::standard(1, 1);
        let pt = pt_for(2, 3, 55);
        let z = fresh_scalar(56);
        // acting on slots (0, 2): conjugate the (0,1)-embedded form by
        // the swap of factors 1 and 2
        let pair = r_check_pair(&pt, &s, 0, 2, 3, &z).unwrap();
        let adj = r_check_embedded(&pt, &s, 0, 3, &z).unwrap();
        let swap = Perm::from_word(vec![0, 2, 1]).unwrap();
        assert_eq!(pair, adj.permute_factors(&swap).unwrap());
    }

    #[test]
    fn crossing_block_single_factor_and_exchange_rule() {
        let s = GradedSpace::standard(1, 1);
        let pt = pt_for(2, 4, 57);
        let (z1, z2) = (pt.zs[0].clone(), pt.zs[1].clone());
        let (w1, w2) = (pt.zs[2].clone(), pt.zs[3].clone());

        let single = crossing_block(&pt, &s, &[z1.clone()], &[w1.clone()], false).unwrap();
        assert_eq!(single, r_check(&pt, &s, &w1.div(&z1).unwrap()).unwrap());

        // Rc_{omega^l}(..z2,z1.., w) Rc_1(z2/z1)
        //   = Rc_{l+1}(z2/z1) Rc_{omega^l}(..z1,z2.., w)
        let l = 2usize;
        let swapped = crossing_block(&pt, &s, &[z2.clone(), z1.clone()], &[w1.clone(), w2.clone()], false).unwrap();
        let plainb = crossing_block(&pt, &s, &[z1.clone(), z2.clone()], &[w1.clone(), w2.clone()], false).unwrap();
        let arg = z2.div(&z1).unwrap();
        let lhs = swapped
            .matmul(&r_check_embedded(&pt, &s, 0, 4, &arg).unwrap())
            .unwrap();
        let rhs = r_check_embedded(&pt, &s, l, 4, &arg)
            .unwrap()
            .matmul(&plainb)
            .unwrap();
        assert_eq!(lhs, rhs);

        // w-side exchange:
        // Rc_{omega^l}(z, ..w2,w1..) Rc_{k+1}(w2/w1)
        //   = Rc_1(w2/w1) Rc_{omega^l}(z, ..w1,w2..)
        let k = 2usize;
        let swapped_w = crossing_block(&pt, &s, &[z1.clone(), z2.clone()], &[w2.clone(), w1.clone()], false).unwrap();
        let argw = w2.div(&w1).unwrap();
        let lhs_w = swapped_w
            .matmul(&r_check_embedded(&pt, &s, k, 4, &argw).unwrap())
            .unwrap();
        let rhs_w = r_check_embedded(&pt, &s, 0, 4, &argw)
            .unwrap()
            .matmul(&plainb)
            .unwrap();
        assert_eq!(lhs_w, rhs_w);
    }

    #[test]
    fn crossing_block_matches_sigma_form() {
        // the double product agrees with the braid built from the
        // rotation word over the concatenated variable list
        let s = GradedSpace::standard(2, 0);
        let pt = pt_for(2, 4, 58);
        let zs = &pt.zs[0..2];
        let ws = &pt.zs[2..4];
        let block = crossing_block(&pt, &s, zs, ws, false).unwrap();
        let rot = Perm::rotation(4, 2);
        let vars: Vec<JetScalar> = pt.zs.clone();
        let braid = r_check_sigma(&pt, &s, &rot, &vars).unwrap();
        assert_eq!(block, braid);
    }
}
