use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteRingError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(FiniteRing, FiniteRing),
    #[error("{0} has no Frobenius exponent")]
    NoFrobenius(FiniteRing),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
}

/// A finite commutative ring with elements encoded as `0..size()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FiniteRing {
    /// Integers modulo `n`.
    Zn { n: u64 },
    /// `Z_p[x]/(x² − a)` for a quadratic nonresidue `a`. Element `a₀ + a₁x`
    /// is encoded as `a₀ + p·a₁`.
    Gfp2 { p: u64, nonresidue: u64 },
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteRing::Zn { n } => write!(f, "Z_{n}"),
            FiniteRing::Gfp2 { p, nonresidue } => write!(f, "GF({p}^2)[x^2={nonresidue}]"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return k;
        }
        k += 1;
    }
    n
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl FiniteRing {
    pub fn zn(n: u64) -> Result<Self, FiniteRingError> {
        if n < 2 {
            return Err(FiniteRingError::BadModulus(n));
        }
        Ok(FiniteRing::Zn { n })
    }

    /// Integers modulo `p²`.
    pub fn zp2(p: u64) -> Result<Self, FiniteRingError> {
        if !is_prime(p) {
            return Err(FiniteRingError::NotPrime(p));
        }
        Self::zn(p * p)
    }

    /// `GF(p²)` built with the smallest positive quadratic nonresidue.
    /// Requires an odd prime.
    pub fn gfp2(p: u64) -> Result<Self, FiniteRingError> {
        if !is_prime(p) || p == 2 {
            return Err(FiniteRingError::NotPrime(p));
        }
        let nonresidue = (1..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).expect("odd prime has a nonresidue");
        Ok(FiniteRing::Gfp2 { p, nonresidue })
    }

    pub fn size(&self) -> u64 {
        match *self {
            FiniteRing::Zn { n } => n,
            FiniteRing::Gfp2 { p, .. } => p * p,
        }
    }

    /// Characteristic prime when the ring is `Z_{p^k}` or `GF(p²)`.
    pub fn frobenius_exponent(&self) -> Option<u64> {
        match *self {
            FiniteRing::Zn { n } => {
                let p = smallest_prime_factor(n);
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                (m == 1).then_some(p)
            }
            FiniteRing::Gfp2 { p, .. } => Some(p),
        }
    }

    /// Lattice coordinates of an encoded element: `(x mod p, x div p)` for
    /// `Z_{p²}`, `(a₀, a₁)` for `GF(p²)`.
    pub fn coordinates(&self, x: u64) -> (u64, u64) {
        match *self {
            FiniteRing::Zn { n } => {
                let p = self.frobenius_exponent().unwrap_or(n);
                (x % p, x / p)
            }
            FiniteRing::Gfp2 { p, .. } => (x % p, x / p),
        }
    }

    /// Side lengths of the coordinate lattice from [`Self::coordinates`].
    pub fn coordinate_dims(&self) -> (u64, u64) {
        let n = self.size();
        match *self {
            FiniteRing::Zn { n: m } => {
                let p = self.frobenius_exponent().unwrap_or(m);
                (p, n / p)
            }
            FiniteRing::Gfp2 { p, .. } => (p, p),
        }
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        match *self {
            FiniteRing::Zn { n } => {
                let s = x + y;
                if s >= n {
                    s - n
                } else {
                    s
                }
            }
            FiniteRing::Gfp2 { p, .. } => {
                let a0 = (x % p + y % p) % p;
                let a1 = (x / p + y / p) % p;
                a0 + p * a1
            }
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match *self {
            FiniteRing::Zn { n } => mul_mod(x, y, n),
            FiniteRing::Gfp2 { p, nonresidue } => {
                let (x0, x1) = (x % p, x / p);
                let (y0, y1) = (y % p, y / p);
                let a0 = (mul_mod(x0, y0, p) + mul_mod(nonresidue, mul_mod(x1, y1, p), p)) % p;
                let a1 = (mul_mod(x0, y1, p) + mul_mod(x1, y0, p)) % p;
                a0 + p * a1
            }
        }
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn element(&self, value: u64) -> FiniteResidue {
        FiniteResidue { value: value % self.size(), ring: *self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteResidue {
    pub value: u64,
    pub ring: FiniteRing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exponent {
    Power(u64),
    /// The ring's characteristic prime.
    Frobenius,
}

impl Exponent {
    pub fn resolve(self, ring: &FiniteRing) -> Result<u64, FiniteRingError> {
        match self {
            Exponent::Power(e) => Ok(e),
            Exponent::Frobenius => ring.frobenius_exponent().ok_or(FiniteRingError::NoFrobenius(*ring)),
        }
    }
}

pub fn finite_step(x: FiniteResidue, exponent: Exponent, c: FiniteResidue) -> Result<FiniteResidue, FiniteRingError> {
    if x.ring != c.ring {
        return Err(FiniteRingError::RingMismatch(x.ring, c.ring));
    }
    let ring = x.ring;
    let e = exponent.resolve(&ring)?;
    let value = ring.add(ring.pow(x.value, e), c.value);
    Ok(FiniteResidue { value, ring })
}
