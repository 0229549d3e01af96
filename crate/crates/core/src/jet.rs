//! Truncated Laurent jets in one infinitesimal.
//!
//! A `JetScalar` is an exactly-known window of a Laurent expansion
//! `sum_e c_e eps^e`: the coefficients from the valuation up to
//! `valuation + window` are exact, everything above is unknown. The
//! window never exceeds the jet order K fixed at construction, and it
//! shrinks honestly through arithmetic, so reading a coefficient either
//! returns an exact field element or fails with
//! `PoleOrderExceedsJet`. The canonical zero is treated as exact.
//!
//! Plain field values are jets with a single coefficient at exponent 0
//! and a full window, so bulk tensor arithmetic at ordinary evaluation
//! points costs one field operation per entry.

use crate::error::Error;
use crate::field::Coefficient;
use crate::Result;
use std::fmt;

#[derive(Clone)]
pub struct JetScalar {
    val: i64,
    /// Number of exactly-known coefficients starting at `val`.
    /// Irrelevant for the canonical zero (empty support).
    window: usize,
    order: usize,
    /// Leading coefficient nonzero, trailing zeros trimmed,
    /// `coeffs.len() <= window <= order`.
    coeffs: Vec<Coefficient>,
}

impl JetScalar {
    pub fn zero(order: usize) -> Self {
        JetScalar { val: 0, window: order, order, coeffs: Vec::new() }
    }

    pub fn constant(c: Coefficient, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Coefficient::one(), order)
    }

    pub fn from_int(v: i64, order: usize) -> Self {
        Self::constant(Coefficient::from_int(v), order)
    }

    /// c * eps^e.
    pub fn monomial(c: Coefficient, e: i64, order: usize) -> Self {
        if c.is_zero() {
            return Self::zero(order);
        }
        JetScalar { val: e, window: order, order, coeffs: vec![c] }
    }

    /// The infinitesimal eps itself.
    pub fn eps(order: usize) -> Self {
        Self::monomial(Coefficient::one(), 1, order)
    }

    /// base * (1 + eps)^rate, exact to the full order.
    pub fn one_plus_eps_pow(base: &Coefficient, rate: u32, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        for i in 0..order {
            let b = binomial(rate as u128, i as u128);
            coeffs.push(Coefficient::from_int(b as i64).mul(base));
        }
        Self::from_parts(0, order, order, coeffs)
    }

    fn from_parts(mut val: i64, mut window: usize, order: usize, mut coeffs: Vec<Coefficient>) -> Self {
        coeffs.truncate(window.min(order));
        window = window.min(order);
        // strip leading zeros; the window end stays put
        let mut lead = 0;
        while lead < coeffs.len() && coeffs[lead].is_zero() {
            lead += 1;
        }
        if lead > 0 {
            coeffs.drain(..lead);
            val += lead as i64;
            window -= lead;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Self::zero(order);
        }
        JetScalar { val, window, order, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Valuation of the leading term; `None` for the canonical zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.val) }
    }

    pub fn leading_coefficient(&self) -> Option<&Coefficient> {
        self.coeffs.first()
    }

    /// True when the jet is a plain field value (support only at eps^0).
    pub fn is_plain(&self) -> bool {
        self.is_zero() || (self.val == 0 && self.coeffs.len() == 1)
    }

    /// Exact coefficient of eps^e, or an error when e lies above the
    /// known window.
    pub fn coefficient_at(&self, e: i64) -> Result<Coefficient> {
        if self.is_zero() {
            return Ok(Coefficient::zero());
        }
        if e < self.val {
            return Ok(Coefficient::zero());
        }
        let rel = (e - self.val) as usize;
        if rel < self.coeffs.len() {
            return Ok(self.coeffs[rel].clone());
        }
        if rel < self.window {
            return Ok(Coefficient::zero());
        }
        Err(Error::PoleOrderExceedsJet { valuation: self.val, order: self.order })
    }

    /// The plain value of a jet with no infinitesimal part.
    pub fn as_plain(&self) -> Option<Coefficient> {
        if self.is_zero() {
            return Some(Coefficient::zero());
        }
        if self.val == 0 && self.coeffs.len() == 1 {
            return Some(self.coeffs[0].clone());
        }
        None
    }

    fn window_end(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.val + self.window as i64
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let val = self.val.min(other.val);
        let end = self.window_end().min(other.window_end());
        let len = (end - val).max(0) as usize;
        let mut coeffs = vec![Coefficient::zero(); len.min(self.order)];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = val + i as i64;
            let a = if e >= self.val { self.support_at(e) } else { Coefficient::zero() };
            let b = if e >= other.val { other.support_at(e) } else { Coefficient::zero() };
            *c = a.add(&b);
        }
        Self::from_parts(val, len, self.order, coeffs)
    }

    fn support_at(&self, e: i64) -> Coefficient {
        if e < self.val {
            return Coefficient::zero();
        }
        let rel = (e - self.val) as usize;
        if rel < self.coeffs.len() {
            self.coeffs[rel].clone()
        } else {
            Coefficient::zero()
        }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.order.max(other.order));
        }
        let window = self.window.min(other.window).min(self.order);
        let len = window.min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut coeffs = vec![Coefficient::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_parts(self.val + other.val, window, self.order, coeffs)
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        self.mul(&JetScalar::constant(c.clone(), self.order))
    }

    /// Multiplicative inverse; the valuation flips sign. Fails on the
    /// canonical zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByExactZero);
        }
        let window = self.window.min(self.order);
        let u0 = self.coeffs[0].inv()?;
        let mut out = vec![Coefficient::zero(); window];
        out[0] = u0.clone();
        for j in 1..window {
            let mut s = Coefficient::zero();
            for i in 1..=j {
                let ui = self.support_at(self.val + i as i64);
                if ui.is_zero() {
                    continue;
                }
                s = s.add(&ui.mul(&out[j - i]));
            }
            out[j] = s.neg().mul(&u0);
        }
        Ok(Self::from_parts(-self.val, window, self.order, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.order);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// exp of a jet with strictly positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::one(self.order));
        }
        if self.val < 1 {
            return Err(Error::Config("exp needs positive valuation".into()));
        }
        let mut acc = Self::one(self.order);
        let mut term = Self::one(self.order);
        let mut n = 1i64;
        while (n * self.val) < self.order as i64 {
            term = term.mul(self).scale(&Coefficient::from_int(n).inv()?);
            acc = acc.add(&term);
            n += 1;
        }
        Ok(acc)
    }

    /// log(1 + u) for a jet `self = 1 + u` with u of positive valuation.
    pub fn log1(&self) -> Result<Self> {
        let u = self.sub(&Self::one(self.order));
        if u.is_zero() {
            return Ok(Self::zero(self.order));
        }
        if u.val < 1 {
            return Err(Error::Config("log needs leading term 1".into()));
        }
        let mut acc = Self::zero(self.order);
        let mut upow = Self::one(self.order);
        let mut m = 1i64;
        while ((m - 1) * u.val) < self.order as i64 {
            upow = upow.mul(&u);
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let c = Coefficient::from_int(sign).mul(&Coefficient::from_int(m).inv()?);
            acc = acc.add(&upow.scale(&c));
            m += 1;
        }
        Ok(acc)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Semantic equality: the difference has no support inside its window.
impl PartialEq for JetScalar {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Debug for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*e^{}", c.to_decimal_string(), self.val + i as i64))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
