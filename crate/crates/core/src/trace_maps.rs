//! Partial-trace maps between shuffle algebras.
//!
//! `psi` traces the crossing block against an element placed in the
//! second half of the slots; `psi_prime` is its inverse with the bullet
//! block; `psi_tilde` is the projected relative acting between algebras
//! of different rank through an ambient space.

use crate::error::Error;
use crate::family::{AlgebraTag, EqOptions, ShuffleElement, TensorFamily};
use crate::jet::JetScalar;
use crate::point::EvalPoint;
use crate::rmatrix::{crossing_block_apply, MulSide};
use crate::space::EmbeddingSpec;
use crate::tensor::Tensor;
use crate::Result;
use rand::Rng;
use std::sync::Arc;

fn q_shifted(pt: &EvalPoint, zs: &[JetScalar]) -> Vec<JetScalar> {
    zs.iter().map(|z| z.mul(&pt.q)).collect()
}

/// Tr over the upper half of Rc_{omega^k}(qz, z) . (id (x) X(z)).
/// An anti-isomorphism from the primed algebra onto the plus algebra.
pub fn psi(x: &ShuffleElement) -> ShuffleElement {
    let fam = x.family.clone();
    let space = fam.space().clone();
    let k = fam.arity();
    let tag = if x.tag == AlgebraTag::Prime { AlgebraTag::Plus } else { AlgebraTag::Generic };
    let out = TensorFamily::new(
        space.clone(),
        k,
        true,
        fam.degree_bound + 8 * k as u64,
        Arc::new(move |pt, zs| {
            let xt = fam.eval(pt, zs)?;
            let upper: Vec<usize> = (k..2 * k).collect();
            let placed = xt.place_in_slots(&upper, 2 * k)?;
            let qz = q_shifted(pt, zs);
            let m = crossing_block_apply(pt, &space, &qz, zs, false, placed, MulSide::Left)?;
            m.partial_trace(&upper)
        }),
    );
    ShuffleElement::new(out, tag).with_claims(x.claimed_symmetric, false)
}

/// Tr over the lower half of Rc_bullet_{omega^k}(z, qz) . X(z): the
/// inverse of `psi`.
pub fn psi_prime(x: &ShuffleElement) -> ShuffleElement {
    let fam = x.family.clone();
    let space = fam.space().clone();
    let k = fam.arity();
    let tag = if x.tag == AlgebraTag::Plus { AlgebraTag::Prime } else { AlgebraTag::Generic };
    let out = TensorFamily::new(
        space.clone(),
        k,
        true,
        fam.degree_bound + 8 * k as u64,
        Arc::new(move |pt, zs| {
            let xt = fam.eval(pt, zs)?;
            let lower: Vec<usize> = (0..k).collect();
            let placed = xt.place_in_slots(&lower, 2 * k)?;
            let qz = q_shifted(pt, zs);
            let m = crossing_block_apply(pt, &space, zs, &qz, true, placed, MulSide::Left)?;
            m.partial_trace(&lower)
        }),
    );
    ShuffleElement::new(out, tag).with_claims(x.claimed_symmetric, false)
}

/// The projected trace map through the ambient space of an embedding:
/// the element over V' is pushed into the ambient space, traced against
/// the ambient crossing block, and the result restricted to V.
pub fn psi_tilde(x: &ShuffleElement, spec: &EmbeddingSpec) -> Result<ShuffleElement> {
    if x.space() != &spec.v_prime {
        return Err(Error::GradingMismatch);
    }
    let fam = x.family.clone();
    let spec = spec.clone();
    let k = fam.arity();
    let out_space = spec.v.clone();
    let out = TensorFamily::new(
        out_space,
        k,
        true,
        fam.degree_bound + 8 * k as u64,
        Arc::new(move |pt, zs| {
            let xt = fam.eval(pt, zs)?;
            let emb = xt.embed_labels(spec.v_ambient.clone(), spec.iota_prime())?;
            let upper: Vec<usize> = (k..2 * k).collect();
            let placed = emb.place_in_slots(&upper, 2 * k)?;
            let qz = q_shifted(pt, zs);
            let m =
                crossing_block_apply(pt, &spec.v_ambient, &qz, zs, false, placed, MulSide::Left)?;
            let traced = m.partial_trace(&upper)?;
            traced.restrict_labels(spec.v.clone(), spec.iota())
        }),
    );
    Ok(ShuffleElement::new(out, AlgebraTag::Plus))
}

/// Confirms that the full trace in `psi_tilde` only receives
/// contributions from the embedded block: restricting the traced
/// diagonal labels to the image of iota' changes nothing.
pub fn psi_tilde_block_trace_agrees(
    x: &ShuffleElement,
    spec: &EmbeddingSpec,
    pt: &EvalPoint,
    zs: &[JetScalar],
) -> Result<bool> {
    let k = x.arity();
    let xt = x.family.eval(pt, zs)?;
    let emb = xt.embed_labels(spec.v_ambient.clone(), spec.iota_prime())?;
    let upper: Vec<usize> = (k..2 * k).collect();
    let placed = emb.place_in_slots(&upper, 2 * k)?;
    let qz = q_shifted(pt, zs);
    let m = crossing_block_apply(pt, &spec.v_ambient, &qz, zs, false, placed, MulSide::Left)?;
    let full = m.partial_trace(&upper)?;
    let block = m.partial_trace_restricted(&upper, spec.iota_prime())?;
    Ok(full == block)
}

/// Applies one leg of the embedding data to a tensor, factorwise.
pub fn embed_project(
    x: &Tensor,
    spec: &EmbeddingSpec,
    direction: EmbedDirection,
) -> Result<Tensor> {
    match direction {
        EmbedDirection::Iota => x.embed_labels(spec.v_ambient.clone(), spec.iota()),
        EmbedDirection::IotaPrime => x.embed_labels(spec.v_ambient.clone(), spec.iota_prime()),
        EmbedDirection::Pi => x.restrict_labels(spec.v.clone(), spec.iota()),
        EmbedDirection::PiPrime => x.restrict_labels(spec.v_prime.clone(), spec.iota_prime()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedDirection {
    Iota,
    IotaPrime,
    Pi,
    PiPrime,
}

/// Checks the anti-homomorphism property psi(A *' B) = psi(B) * psi(A)
/// by randomized evaluation.
pub fn check_anti_hom<R: Rng + ?Sized>(
    a: &ShuffleElement,
    b: &ShuffleElement,
    opts: EqOptions,
    rng: &mut R,
) -> Result<bool> {
    let lhs = psi(&crate::shuffle::shuffle_product_prime(a, b)?);
    let rhs = crate::shuffle::shuffle_product(&psi(b), &psi(a))?;
    Ok(crate::family::prob_equal_elements(&lhs, &rhs, opts, rng)?.equal)
}

/// The trace identity from crossing unitarity:
/// Tr[F (x) G] = Tr[Rc_bullet_{omega^k}(w, z) F_{1..l} Rc_{omega^l}(z, w) G_{1..k}].
pub fn trace_identity_holds(
    pt: &EvalPoint,
    f: &Tensor,
    g: &Tensor,
    zs: &[JetScalar],
    ws: &[JetScalar],
) -> Result<bool> {
    let space = f.space().clone();
    let (l, k) = (f.arity(), g.arity());
    if zs.len() != k || ws.len() != l {
        return Err(Error::Config("variable lists must match tensor arities".into()));
    }
    let total = k + l;
    let lhs = f.trace().mul(&g.trace());
    let g_slots: Vec<usize> = (0..k).collect();
    let f_slots: Vec<usize> = (0..l).collect();
    let mut m = g.place_in_slots(&g_slots, total)?;
    m = crossing_block_apply(pt, &space, zs, ws, false, m, MulSide::Left)?;
    m = m.apply_small_left(f, &f_slots)?;
    m = crossing_block_apply(pt, &space, ws, zs, true, m, MulSide::Left)?;
    Ok(m.trace() == lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{prob_equal_elements, with_sampled_point};
    use crate::field::Coefficient;
    use crate::perm::Perm;
    use crate::point::{sample_point, SampleSpec};
    use crate::rmatrix::{r_check_sigma, r_check_sigma_inverse};
    use crate::shuffle::{
        constant_element, gamma_prime, matrix_unit_element, shuffle_product,
        shuffle_product_prime, unit_element,
    };
    use crate::space::GradedSpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn opts(trials: u32) -> EqOptions {
        EqOptions { trials, ..Default::default() }
    }

    fn random_constant_element<R: Rng + ?Sized>(
        s: &GradedSpace,
        arity: usize,
        tag: AlgebraTag,
        rng: &mut R,
    ) -> ShuffleElement {
        let mut t = Tensor::zeros(s.clone(), arity, 6);
        for r in 0..t.side() {
            for c in 0..t.side() {
                t.set(r, c, JetScalar::constant(Coefficient::sample_nonzero(rng), 6));
            }
        }
        constant_element(t, tag)
    }

    #[test]
    fn psi_of_scalar_unit_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        let s = GradedSpace::standard(1, 1);
        let one = unit_element(&s, AlgebraTag::Prime);
        let mapped = psi(&one);
        let pt = sample_point(&mut rng, SampleSpec::new(2, 0)).unwrap();
        let t = mapped.family.eval(&pt, &[]).unwrap();
        assert_eq!(t.get(0, 0), &JetScalar::one(pt.order));
        let back = psi_prime(&unit_element(&s, AlgebraTag::Plus));
        let t2 = back.family.eval(&pt, &[]).unwrap();
        assert_eq!(t2.get(0, 0), &JetScalar::one(pt.order));
    }

    #[test]
    fn psi_of_rank_one_projector_scalar_case() {
        // one-dimensional space: psi[E_11] = (q t^(-1/2) - t^(1/2)) / (q - 1)
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let s = GradedSpace::standard(1, 0);
        let e = matrix_unit_element(&s, 0, 0, AlgebraTag::Prime).unwrap();
        let mapped = psi(&e);
        let pt = sample_point(&mut rng, SampleSpec::new(1, 1)).unwrap();
        let got = mapped.family.eval(&pt, &pt.zs.clone()).unwrap();
        let expect = pt
            .q
            .mul(&pt.t_half_pow(-1).unwrap())
            .sub(&pt.t_half)
            .div(&pt.q.sub(&JetScalar::one(pt.order)))
            .unwrap();
        assert_eq!(got.get(0, 0), &expect);
    }

    #[test]
    fn psi_exchange_relation() {
        // conjugating the argument by a braid commutes with the map
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        let s = GradedSpace::standard(1, 1);
        let x = random_constant_element(&s, 2, AlgebraTag::Generic, &mut rng);
        let sigma = Perm::adjacent(2, 0);
        let ok = with_sampled_point(&mut rng, SampleSpec::new(2, 2), 8, |pt| {
            let zs = pt.zs.clone();
            let zs_perm: Vec<JetScalar> = (0..2).map(|p| zs[sigma.apply(p)].clone()).collect();
            let rc = r_check_sigma(pt, &s, &sigma, &zs)?;
            let rc_inv = r_check_sigma_inverse(pt, &s, &sigma, &zs)?;
            let lhs = rc_inv
                .matmul(&psi(&x).family.eval(pt, &zs_perm)?)?
                .matmul(&rc)?;
            // build the conjugated family and push it through the map
            let xf = x.family.clone();
            let s2 = s.clone();
            let sg = sigma.clone();
            let conj = TensorFamily::new(
                s.clone(),
                2,
                true,
                xf.degree_bound + 16,
                Arc::new(move |p: &EvalPoint, vars: &[JetScalar]| {
                    let vars_perm: Vec<JetScalar> =
                        (0..2).map(|q| vars[sg.apply(q)].clone()).collect();
                    let rc = r_check_sigma(p, &s2, &sg, vars)?;
                    let rc_inv = r_check_sigma_inverse(p, &s2, &sg, vars)?;
                    rc_inv.matmul(&xf.eval(p, &vars_perm)?)?.matmul(&rc)
                }),
            );
            let rhs = psi(&ShuffleElement::new(conj, AlgebraTag::Generic))
                .family
                .eval(pt, &zs)?;
            Ok(lhs == rhs)
        })
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn psi_round_trips_with_psi_prime() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for arity in [1usize, 2] {
            let s = GradedSpace::standard(1, 1);
            let x = random_constant_element(&s, arity, AlgebraTag::Generic, &mut rng);
            let back = psi_prime(&psi(&x));
            let rep = prob_equal_elements(&back, &x, opts(2), &mut rng).unwrap();
            assert!(rep.equal, "psi' psi != id at arity {arity}");
            let fwd = psi(&psi_prime(&x));
            let rep2 = prob_equal_elements(&fwd, &x, opts(2), &mut rng).unwrap();
            assert!(rep2.equal, "psi psi' != id at arity {arity}");
        }
    }

    #[test]
    fn psi_preserves_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        let s = GradedSpace::standard(2, 0);
        let h = matrix_unit_element(&s, 0, 0, AlgebraTag::Prime).unwrap();
        let hh = shuffle_product_prime(&h, &h).unwrap();
        let mapped = psi(&hh);
        assert!(crate::shuffle::is_symmetric(&mapped, 2, &mut rng).unwrap());
    }

    #[test]
    fn anti_homomorphism_on_rank_one_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        let s = GradedSpace::standard(2, 0);
        for (pa, pb) in [((0, 0), (0, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 0))] {
            let a = matrix_unit_element(&s, pa.0, pa.1, AlgebraTag::Prime).unwrap();
            let b = matrix_unit_element(&s, pb.0, pb.1, AlgebraTag::Prime).unwrap();
            assert!(
                check_anti_hom(&a, &b, opts(2), &mut rng).unwrap(),
                "anti-hom failed for {pa:?} {pb:?}"
            );
        }
    }

    #[test]
    fn gamma_level_transport() {
        // Gamma_plus[psi A, psi B] = psi[Gamma_prime[B, A]]
        let mut rng = ChaCha8Rng::seed_from_u64(86);
        let s = GradedSpace::standard(1, 1);
        let a = matrix_unit_element(&s, 0, 0, AlgebraTag::Prime).unwrap();
        let b = matrix_unit_element(&s, 1, 1, AlgebraTag::Prime).unwrap();
        let ok = with_sampled_point(&mut rng, SampleSpec::new(2, 2), 8, |pt| {
            let zs = pt.zs.clone();
            let lhs = crate::shuffle::gamma_plus(pt, &psi(&a), &psi(&b), &zs)?;
            let (af, bf) = (a.clone(), b.clone());
            let s2 = s.clone();
            let inner = TensorFamily::new(
                s.clone(),
                2,
                true,
                64,
                Arc::new(move |p: &EvalPoint, vars: &[JetScalar]| {
                    let _ = &s2;
                    gamma_prime(p, &bf, &af, vars)
                }),
            );
            let rhs = psi(&ShuffleElement::new(inner, AlgebraTag::Generic))
                .family
                .eval(pt, &zs)?;
            Ok(lhs == rhs)
        })
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn trace_identity_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(87);
        let s = GradedSpace::standard(1, 1);
        // identity tensors: both sides are dim^(k+l)
        let idf = Tensor::identity(s.clone(), 1, 6);
        let idg = Tensor::identity(s.clone(), 1, 6);
        let pt = sample_point(&mut rng, SampleSpec::new(2, 2)).unwrap();
        assert!(trace_identity_holds(&pt, &idf, &idg, &pt.zs[0..1], &pt.zs[1..2]).unwrap());

        // random diagonal tensors at k = l = 1
        let mut fd = Tensor::zeros(s.clone(), 1, 6);
        let mut gd = Tensor::zeros(s.clone(), 1, 6);
        for i in 0..2 {
            fd.set(i, i, JetScalar::constant(Coefficient::sample_nonzero(&mut rng), 6));
            gd.set(i, i, JetScalar::constant(Coefficient::sample_nonzero(&mut rng), 6));
        }
        assert!(trace_identity_holds(&pt, &fd, &gd, &pt.zs[0..1], &pt.zs[1..2]).unwrap());

        // dense tensors at k = 2, l = 1
        let pt3 = sample_point(&mut rng, SampleSpec::new(2, 3)).unwrap();
        let f = {
            let mut t = Tensor::zeros(s.clone(), 1, 6);
            for r in 0..2 {
                for c in 0..2 {
                    t.set(r, c, JetScalar::constant(Coefficient::sample_nonzero(&mut rng), 6));
                }
            }
            t
        };
        let g = {
            let mut t = Tensor::zeros(s.clone(), 2, 6);
            for r in 0..4 {
                for c in 0..4 {
                    t.set(r, c, JetScalar::constant(Coefficient::sample_nonzero(&mut rng), 6));
                }
            }
            t
        };
        assert!(trace_identity_holds(&pt3, &f, &g, &pt3.zs[0..2], &pt3.zs[2..3]).unwrap());
    }

    #[test]
    fn psi_tilde_reduces_to_projected_psi_and_fails_generically() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        // ambient = V' = C^(1|1), V = bosonic line: psi_tilde is the
        // pi-projected psi and an anti-homomorphism (ambient case)
        let v = GradedSpace::standard(1, 0);
        let vp = GradedSpace::standard(1, 1);
        let spec = EmbeddingSpec::new(v.clone(), vp.clone(), vp.clone(), vec![0], vec![0, 1]).unwrap();
        let a = matrix_unit_element(&vp, 0, 0, AlgebraTag::Prime).unwrap();
        let b = matrix_unit_element(&vp, 1, 1, AlgebraTag::Prime).unwrap();
        let lhs = psi_tilde(&shuffle_product_prime(&a, &b).unwrap(), &spec).unwrap();
        let rhs = shuffle_product(
            &psi_tilde(&b, &spec).unwrap(),
            &psi_tilde(&a, &spec).unwrap(),
        )
        .unwrap();
        assert!(prob_equal_elements(&lhs, &rhs, opts(2), &mut rng).unwrap().equal);

        // one-dimensional V' inside a bigger ambient space: generically
        // not an anti-homomorphism
        let v2 = GradedSpace::standard(1, 1);
        let vp2 = GradedSpace::standard(1, 0);
        let amb2 = GradedSpace::with_grading(vec![1, 1, -1]).unwrap();
        let spec2 = EmbeddingSpec::new(v2, vp2.clone(), amb2, vec![0, 2], vec![1]).unwrap();
        let h = matrix_unit_element(&vp2, 0, 0, AlgebraTag::Prime).unwrap();
        let lhs2 = psi_tilde(&shuffle_product_prime(&h, &h).unwrap(), &spec2).unwrap();
        let rhs2 = shuffle_product(
            &psi_tilde(&h, &spec2).unwrap(),
            &psi_tilde(&h, &spec2).unwrap(),
        )
        .unwrap();
        let rep = prob_equal_elements(&lhs2, &rhs2, opts(2), &mut rng).unwrap();
        assert!(!rep.equal, "projected map should fail to be an anti-homomorphism here");
    }

    #[test]
    fn ambient_braid_restricts_to_the_small_braid() {
        // the projections of the embedding intertwine the two braided
        // matrices: restricting the ambient crossing along iota (x) iota
        // reproduces the crossing of the subspace
        let mut rng = ChaCha8Rng::seed_from_u64(890);
        let v = GradedSpace::standard(1, 0);
        let vp = GradedSpace::standard(1, 1);
        let amb = GradedSpace::standard(2, 1);
        let spec = EmbeddingSpec::new(v.clone(), vp, amb.clone(), vec![0], vec![1, 2]).unwrap();
        let pt = sample_point(&mut rng, SampleSpec::new(3, 2)).unwrap();
        let arg = pt.zs[0].div(&pt.zs[1]).unwrap();
        let big = crate::rmatrix::r_check(&pt, &amb, &arg).unwrap();
        let small = crate::rmatrix::r_check(&pt, &v, &arg).unwrap();
        let restricted = big.restrict_labels(v.clone(), spec.iota()).unwrap();
        assert_eq!(restricted, small);
        // and along iota' (x) iota' for the primed subspace
        let vp2 = GradedSpace::standard(1, 1);
        let small2 = crate::rmatrix::r_check(&pt, &vp2, &arg).unwrap();
        let restricted2 = big.restrict_labels(vp2, spec.iota_prime()).unwrap();
        assert_eq!(restricted2, small2);
    }

    #[test]
    fn psi_tilde_trace_supported_on_embedded_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let v = GradedSpace::standard(1, 1);
        let vp = GradedSpace::standard(1, 0);
        let amb = GradedSpace::with_grading(vec![1, 1, -1]).unwrap();
        let spec = EmbeddingSpec::new(v, vp.clone(), amb, vec![0, 2], vec![1]).unwrap();
        let h = matrix_unit_element(&vp, 0, 0, AlgebraTag::Prime).unwrap();
        let hh = shuffle_product_prime(&h, &h).unwrap();
        let pt = sample_point(&mut rng, SampleSpec::new(3, 2)).unwrap();
        assert!(psi_tilde_block_trace_agrees(&hh, &spec, &pt, &pt.zs.clone()).unwrap());
    }
}
