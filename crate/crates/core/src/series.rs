//! Truncated series of shuffle-algebra elements with exact twist
//! monomial tracking.
//!
//! A series is a map (degree, twist monomial) -> element of matching
//! arity. Twist monomials are tracked exactly rather than sampled: the
//! sharpest form of the generating-function identities is coefficient
//! matching per monomial.

use crate::error::Error;
use crate::family::{prob_equal, AlgebraTag, EqOptions, ShuffleElement, TensorFamily};
use crate::field::Coefficient;
use crate::shuffle::unit_element;
use crate::space::GradedSpace;
use crate::tensor::Tensor;
use crate::Result;
use rand::Rng;
use std::collections::BTreeMap;

/// Exponent vector over the twist variables u_1..u_dim.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct UMono(pub Vec<u32>);

impl UMono {
    pub fn zero(dim: usize) -> Self {
        UMono(vec![0; dim])
    }

    pub fn single(dim: usize, idx: usize, pow: u32) -> Self {
        let mut v = vec![0; dim];
        v[idx] = pow;
        UMono(v)
    }

    pub fn mul(&self, other: &UMono) -> UMono {
        UMono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

type ProductFn = dyn Fn(&ShuffleElement, &ShuffleElement) -> crate::Result<ShuffleElement>;

#[derive(Clone)]
pub struct ElementSeries {
    pub space: GradedSpace,
    pub truncation: usize,
    pub tag: AlgebraTag,
    terms: BTreeMap<usize, BTreeMap<UMono, ShuffleElement>>,
}

impl ElementSeries {
    pub fn zero(space: GradedSpace, truncation: usize, tag: AlgebraTag) -> Self {
        ElementSeries { space, truncation, tag, terms: BTreeMap::new() }
    }

    pub fn unit(space: GradedSpace, truncation: usize, tag: AlgebraTag) -> Self {
        let mut s = Self::zero(space.clone(), truncation, tag);
        let dim = space.dim();
        s.terms
            .entry(0)
            .or_default()
            .insert(UMono::zero(dim), unit_element(&space, tag));
        s
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    pub fn monomials_at(&self, d: usize) -> Vec<UMono> {
        self.terms.get(&d).map(|m| m.keys().cloned().collect()).unwrap_or_default()
    }

    pub fn term(&self, d: usize, mono: &UMono) -> Option<&ShuffleElement> {
        self.terms.get(&d)?.get(mono)
    }

    pub fn add_term(&mut self, d: usize, mono: UMono, elem: ShuffleElement) -> Result<()> {
        if d > self.truncation {
            return Ok(());
        }
        if elem.arity() != d {
            return Err(Error::Config(format!(
                "degree {d} coefficient must have arity {d}, got {}",
                elem.arity()
            )));
        }
        let slot = self.terms.entry(d).or_default();
        match slot.remove(&mono) {
            Some(prev) => {
                slot.insert(mono, prev.add(&elem)?);
            }
            None => {
                slot.insert(mono, elem);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &ElementSeries) -> Result<ElementSeries> {
        let mut out = self.clone();
        for (&d, monos) in &other.terms {
            for (m, e) in monos {
                out.add_term(d, m.clone(), e.clone())?;
            }
        }
        Ok(out)
    }

    pub fn scale_all(&self, c: Coefficient) -> ElementSeries {
        let mut out = self.clone();
        for monos in out.terms.values_mut() {
            for e in monos.values_mut() {
                let c = c.clone();
                *e = e.scale(std::sync::Arc::new(move |pt| {
                    Ok(crate::jet::JetScalar::constant(c.clone(), pt.order))
                }));
            }
        }
        out
    }

    /// Cauchy product under the supplied multiplication.
    pub fn mul(&self, other: &ElementSeries, prod: &ProductFn) -> Result<ElementSeries> {
        let mut out = Self::zero(self.space.clone(), self.truncation, self.tag);
        for (&d1, m1) in &self.terms {
            for (&d2, m2) in &other.terms {
                if d1 + d2 > self.truncation {
                    continue;
                }
                for (mono1, e1) in m1 {
                    for (mono2, e2) in m2 {
                        out.add_term(d1 + d2, mono1.mul(mono2), prod(e1, e2)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// exp of a series with no constant term: sum of powers over
    /// factorials, truncated.
    pub fn exp(&self, prod: &ProductFn) -> Result<ElementSeries> {
        if self.terms.contains_key(&0) {
            return Err(Error::Config("exp input must have no degree-0 term".into()));
        }
        if !crate::field::rational_mode() && crate::field::prime() <= self.truncation as u64 {
            return Err(Error::CharacteristicDivision { order: self.truncation });
        }
        let mut acc = Self::unit(self.space.clone(), self.truncation, self.tag);
        let mut term = Self::unit(self.space.clone(), self.truncation, self.tag);
        for n in 1..=self.truncation {
            term = term.mul(self, prod)?;
            term = term.scale_all(Coefficient::from_int(n as i64).inv()?);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Formal logarithm: the alternating-sum inverse of `exp`, applied
    /// to a series with unit constant term.
    pub fn log(&self, prod: &ProductFn) -> Result<ElementSeries> {
        let mut u = self.clone();
        // subtract the unit
        let dim = self.space.dim();
        u.add_term(0, UMono::zero(dim), unit_element(&self.space, self.tag).neg())?;
        // drop the (now cancelling) degree-0 slot: its element is a zero
        // family that would otherwise pollute the powers
        let mut upow = Self::unit(self.space.clone(), self.truncation, self.tag);
        let mut acc = Self::zero(self.space.clone(), self.truncation, self.tag);
        for m in 1..=self.truncation {
            upow = upow.mul(&u, prod)?;
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let c = Coefficient::from_int(sign).mul(&Coefficient::from_int(m as i64).inv()?);
            acc = acc.add(&upow.scale_all(c))?;
        }
        Ok(acc)
    }

    /// Per-(degree, monomial) randomized equality up to the truncation;
    /// missing coefficients are compared against zero.
    pub fn equal_series<R: Rng + ?Sized>(
        &self,
        other: &ElementSeries,
        opts: EqOptions,
        rng: &mut R,
    ) -> Result<bool> {
        let mut keys: Vec<(usize, UMono)> = Vec::new();
        for (&d, monos) in self.terms.iter().chain(other.terms.iter()) {
            if d > self.truncation {
                continue;
            }
            for m in monos.keys() {
                if !keys.contains(&(d, m.clone())) {
                    keys.push((d, m.clone()));
                }
            }
        }
        for (d, mono) in keys {
            let zero_fam =
                TensorFamily::constant(Tensor::zeros(self.space.clone(), d, 6));
            let a = self.term(d, &mono).map(|e| e.family.clone()).unwrap_or_else(|| zero_fam.clone());
            let b = other.term(d, &mono).map(|e| e.family.clone()).unwrap_or_else(|| zero_fam.clone());
            if !prob_equal(&a, &b, opts, rng)?.equal {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
