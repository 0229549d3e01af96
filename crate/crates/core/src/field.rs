//! Exact coefficient arithmetic.
//!
//! Two modes, chosen once per process: a prime field F_p with p > 2^60
//! (default p = 2^61 - 1, which has a branch-free Mersenne reduction),
//! or exact rationals for small-scale debugging. All coefficients in a
//! run share the mode, so values only store their payload.

use crate::error::Error;
use crate::Result;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Default prime: 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

static PRIME: AtomicU64 = AtomicU64::new(DEFAULT_PRIME);
static RATIONAL_MODE: AtomicBool = AtomicBool::new(false);

/// Selects the prime for prime-field mode. Call before any arithmetic;
/// changing the prime mid-run invalidates existing coefficients.
pub fn set_prime(p: u64) -> Result<()> {
    if p <= (1u64 << 60) {
        return Err(Error::Config(format!(
            "prime {p} too small: need p > 2^60 so small-integer divisions stay invertible"
        )));
    }
    PRIME.store(p, Ordering::SeqCst);
    RATIONAL_MODE.store(false, Ordering::SeqCst);
    Ok(())
}

/// Switches the process to exact rational coefficients (debugging mode).
pub fn set_rational_mode(on: bool) {
    RATIONAL_MODE.store(on, Ordering::SeqCst);
}

pub fn prime() -> u64 {
    PRIME.load(Ordering::Relaxed)
}

pub fn rational_mode() -> bool {
    RATIONAL_MODE.load(Ordering::Relaxed)
}

#[inline]
fn reduce_m61(mut x: u64) -> u64 {
    x = (x & DEFAULT_PRIME) + (x >> 61);
    if x >= DEFAULT_PRIME {
        x -= DEFAULT_PRIME;
    }
    x
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p == DEFAULT_PRIME {
        let t = (a as u128) * (b as u128);
        let lo = (t as u64) & DEFAULT_PRIME;
        let hi = (t >> 61) as u64;
        reduce_m61(lo + reduce_m61(hi))
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// An exact field element: a residue mod the run's prime, or a rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Fp(u64),
    Rat(Box<BigRational>),
}

impl Coefficient {
    pub fn zero() -> Self {
        if rational_mode() {
            Coefficient::Rat(Box::new(BigRational::zero()))
        } else {
            Coefficient::Fp(0)
        }
    }

    pub fn one() -> Self {
        if rational_mode() {
            Coefficient::Rat(Box::new(BigRational::one()))
        } else {
            Coefficient::Fp(1)
        }
    }

    pub fn from_int(v: i64) -> Self {
        if rational_mode() {
            Coefficient::Rat(Box::new(BigRational::from_integer(BigInt::from(v))))
        } else {
            let p = prime();
            let r = v.rem_euclid(p as i64) as u64;
            Coefficient::Fp(r % p)
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Fp(v) => *v == 0,
            Coefficient::Rat(r) => r.is_zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Fp(a), Coefficient::Fp(b)) => {
                let p = prime();
                let mut s = a + b;
                if s >= p {
                    s -= p;
                }
                Coefficient::Fp(s)
            }
            (Coefficient::Rat(a), Coefficient::Rat(b)) => {
                Coefficient::Rat(Box::new(&**a + &**b))
            }
            _ => panic!("mixed coefficient modes"),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Fp(a), Coefficient::Fp(b)) => {
                let p = prime();
                let s = if a >= b { a - b } else { a + p - b };
                Coefficient::Fp(s)
            }
            (Coefficient::Rat(a), Coefficient::Rat(b)) => {
                Coefficient::Rat(Box::new(&**a - &**b))
            }
            _ => panic!("mixed coefficient modes"),
        }
    }

    pub fn neg(&self) -> Self {
        Coefficient::zero().sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Fp(a), Coefficient::Fp(b)) => {
                Coefficient::Fp(mul_mod(*a, *b, prime()))
            }
            (Coefficient::Rat(a), Coefficient::Rat(b)) => {
                Coefficient::Rat(Box::new(&**a * &**b))
            }
            _ => panic!("mixed coefficient modes"),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            Coefficient::Fp(a) => {
                if *a == 0 {
                    return Err(Error::DivisionByExactZero);
                }
                let p = prime();
                Ok(Coefficient::Fp(pow_mod(*a, p - 2, p)))
            }
            Coefficient::Rat(a) => {
                if a.is_zero() {
                    return Err(Error::DivisionByExactZero);
                }
                Ok(Coefficient::Rat(Box::new(BigRational::one() / &**a)))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Coefficient::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Uniform sample from F_p \ {0} (or a small nonzero rational in
    /// rational mode).
    pub fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rational_mode() {
            let v = rng.gen_range(1..=4096i64);
            Coefficient::from_int(v)
        } else {
            let p = prime();
            Coefficient::Fp(rng.gen_range(1..p))
        }
    }

    /// Canonical decimal string: the F_p representative, or "a/b".
    pub fn to_decimal_string(&self) -> String {
        match self {
            Coefficient::Fp(v) => v.to_string(),
            Coefficient::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    pub fn parse_decimal(s: &str) -> Result<Self> {
        if rational_mode() {
            let parts: Vec<&str> = s.split('/').collect();
            let bad = || Error::Config(format!("bad rational literal: {s}"));
            match parts.as_slice() {
                [n] => {
                    let n: BigInt = n.parse().map_err(|_| bad())?;
                    Ok(Coefficient::Rat(Box::new(BigRational::from_integer(n))))
                }
                [n, d] => {
                    let n: BigInt = n.parse().map_err(|_| bad())?;
                    let d: BigInt = d.parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(Error::DivisionByExactZero);
                    }
                    Ok(Coefficient::Rat(Box::new(BigRational::new(n, d))))
                }
                _ => Err(bad()),
            }
        } else {
            let v: u64 = s
                .parse()
                .map_err(|_| Error::Config(format!("bad field literal: {s}")))?;
            Ok(Coefficient::Fp(v % prime()))
        }
    }

    /// Signed magnitude heuristic used only by the rational-mode sampler
    /// guard (keeps debug runs from blowing up).
    pub fn rational_bits(&self) -> usize {
        match self {
            Coefficient::Fp(_) => 0,
            Coefficient::Rat(r) => r.numer().abs().bits() as usize + r.denom().bits() as usize,
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}
