//! Evaluation points, sampling away from the pole loci, and the
//! residue convention.
//!
//! Every identity in the engine is an equality of tensor-valued
//! rational functions in q, t^(1/2), spectral variables z_i and twist
//! variables u_i. An `EvalPoint` binds all of those to jets. Points
//! drawn for identity testing are sampled uniformly from F_p \ {0} and
//! rejected while they sit on the critical set
//! { z_i = q^a z_j, z_i = t^{+-1} q^a z_j, q^b = 1, t^b = 1 }
//! that carries every R-matrix denominator.

use crate::error::Error;
use crate::field::Coefficient;
use crate::jet::JetScalar;
use crate::Result;
use rand::Rng;
use std::collections::BTreeMap;

pub const DEFAULT_ORDER: usize = 6;
pub const DEFAULT_KMAX: i64 = 6;

#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub order: usize,
    pub q: JetScalar,
    /// Square root of t; every half-integer power of t routes through it.
    pub t_half: JetScalar,
    /// Twist parameters u_i, one per label of the widest space in play.
    pub us: Vec<JetScalar>,
    /// Default spectral values z_1..z_k (families may be fed other
    /// variable lists, e.g. residue curves).
    pub zs: Vec<JetScalar>,
    pub extras: BTreeMap<String, JetScalar>,
    pub seed: u64,
}

impl EvalPoint {
    pub fn t(&self) -> JetScalar {
        self.t_half.mul(&self.t_half)
    }

    /// Integer powers of t (computed through t_half^2 so that t^(b/2)
    /// and t^b share the same branch).
    pub fn t_pow(&self, e: i64) -> Result<JetScalar> {
        self.t().pow(e)
    }

    /// t^(e/2) for integer e.
    pub fn t_half_pow(&self, e: i64) -> Result<JetScalar> {
        self.t_half.pow(e)
    }

    pub fn with_zs(&self, zs: Vec<JetScalar>) -> EvalPoint {
        let mut p = self.clone();
        p.zs = zs;
        p
    }

    /// The point with q -> 1/q and t -> 1/t (t_half inverts).
    pub fn inverted_q_t(&self) -> Result<EvalPoint> {
        let mut p = self.clone();
        p.q = self.q.inv()?;
        p.t_half = self.t_half.inv()?;
        Ok(p)
    }

    /// Symbol table for JSON dumps.
    pub fn symbol_table(&self) -> BTreeMap<String, JetScalar> {
        let mut m = BTreeMap::new();
        m.insert("q".to_string(), self.q.clone());
        m.insert("t_half".to_string(), self.t_half.clone());
        for (i, u) in self.us.iter().enumerate() {
            m.insert(format!("u{}", i + 1), u.clone());
        }
        for (i, z) in self.zs.iter().enumerate() {
            m.insert(format!("z{}", i + 1), z.clone());
        }
        for (k, v) in &self.extras {
            m.insert(k.clone(), v.clone());
        }
        m
    }
}

/// Sampling profile: jet order, number of spectral variables, number of
/// twist variables and the q-power window kept clear of the samples.
#[derive(Clone, Copy, Debug)]
pub struct SampleSpec {
    pub order: usize,
    pub arity: usize,
    pub dim: usize,
    pub kmax: i64,
}

impl SampleSpec {
    pub fn new(dim: usize, arity: usize) -> Self {
        SampleSpec { order: DEFAULT_ORDER, arity, dim, kmax: DEFAULT_KMAX }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_kmax(mut self, kmax: i64) -> Self {
        self.kmax = kmax;
        self
    }
}

fn plain(c: Coefficient, order: usize) -> JetScalar {
    JetScalar::constant(c, order)
}

fn is_one(c: &Coefficient) -> bool {
    *c == Coefficient::one()
}

/// Draws an evaluation point off the critical set. Retries internally;
/// over F_p with p ~ 2^61 a retry is essentially impossible.
pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, spec: SampleSpec) -> Result<EvalPoint> {
    'outer: for _ in 0..64 {
        let q = Coefficient::sample_nonzero(rng);
        let t_half = Coefficient::sample_nonzero(rng);
        let t = t_half.mul(&t_half);
        // roots of unity guard for small powers
        let window = (2 * spec.kmax).max(8);
        let mut qp = Coefficient::one();
        let mut tp = Coefficient::one();
        for _ in 0..window {
            qp = qp.mul(&q);
            tp = tp.mul(&t);
            if is_one(&qp) || is_one(&tp) {
                continue 'outer;
            }
        }
        let zs: Vec<Coefficient> = (0..spec.arity).map(|_| Coefficient::sample_nonzero(rng)).collect();
        // z_i != t^s q^a z_j for s in {-1,0,1}, |a| <= kmax, (i,a,s) != (j,0,0)
        for i in 0..zs.len() {
            for j in 0..zs.len() {
                for a in -spec.kmax..=spec.kmax {
                    for s in -1i64..=1 {
                        if i == j && a == 0 && s == 0 {
                            continue;
                        }
                        let shift = q.pow(a).unwrap().mul(&t.pow(s).unwrap());
                        if zs[i] == shift.mul(&zs[j]) {
                            continue 'outer;
                        }
                    }
                }
            }
        }
        // f(q^a) != 0, i.e. q^a != t^{+-1}
        for a in -(2 * spec.kmax)..=(2 * spec.kmax) {
            let qa = q.pow(a).unwrap();
            if qa == t || qa.mul(&t) == Coefficient::one() {
                continue 'outer;
            }
        }
        let us: Vec<JetScalar> =
            (0..spec.dim).map(|_| plain(Coefficient::sample_nonzero(rng), spec.order)).collect();
        return Ok(EvalPoint {
            order: spec.order,
            q: plain(q, spec.order),
            t_half: plain(t_half, spec.order),
            us,
            zs: zs.into_iter().map(|c| plain(c, spec.order)).collect(),
            extras: BTreeMap::new(),
            seed: 0,
        });
    }
    Err(Error::EvaluationAtPole { retries: 64 })
}

/// Residue of the 1-form f(z) dz/z at z = point, computed along the jet
/// curve z = point (1 + eps): since dz/z = d eps/(1 + eps), this is the
/// eps^(-1) coefficient of f(point(1+eps)) / (1+eps).
pub fn residue_dz_over_z<F>(f: F, point: &Coefficient, order: usize) -> Result<JetScalar>
where
    F: Fn(&JetScalar) -> Result<JetScalar>,
{
    let curve = JetScalar::one_plus_eps_pow(point, 1, order);
    let v = f(&curve)?;
    if let Some(val) = v.valuation() {
        if val < -(order as i64 - 1) {
            return Err(Error::PoleOrderExceedsJet { valuation: val, order });
        }
    }
    let corrected = v.div(&JetScalar::one_plus_eps_pow(&Coefficient::one(), 1, order))?;
    Ok(JetScalar::constant(corrected.coefficient_at(-1)?, order))
}
