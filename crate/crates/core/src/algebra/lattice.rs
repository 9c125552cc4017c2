use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice denominators differ: {0} vs {1}")]
    DenominatorMismatch(i64, i64),
    #[error("lattice denominator must be positive, got {0}")]
    BadDenominator(i64),
    #[error("lattice arithmetic overflowed")]
    Overflow,
}

/// The point `(re + i·im) / denom` of `(Z + iZ)/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub re: i64,
    pub im: i64,
    pub denom: i64,
}

impl LatticePoint {
    pub fn new(re: i64, im: i64, denom: i64) -> Result<Self, LatticeError> {
        if denom < 1 {
            return Err(LatticeError::BadDenominator(denom));
        }
        Ok(Self { re, im, denom })
    }

    pub fn zero(denom: i64) -> Result<Self, LatticeError> {
        Self::new(0, 0, denom)
    }

    /// Exact test for `|z| > r` with integer `r`.
    pub fn norm_exceeds(&self, r: i64) -> bool {
        let n2 = self.re as i128 * self.re as i128 + self.im as i128 * self.im as i128;
        let bound = r as i128 * self.denom as i128;
        n2 > bound * bound
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re as f64 / self.denom as f64, self.im as f64 / self.denom as f64)
    }
}

/// `⌊N·(z² + c)⌋ / N` componentwise, in exact integer arithmetic.
pub fn lattice_step(z: LatticePoint, c: LatticePoint) -> Result<LatticePoint, LatticeError> {
    if z.denom != c.denom {
        return Err(LatticeError::DenominatorMismatch(z.denom, c.denom));
    }
    let n = z.denom as i128;
    let (a, b) = (z.re as i128, z.im as i128);
    // z² + c over denominator N²
    let num_re = a
        .checked_mul(a)
        .and_then(|aa| b.checked_mul(b).and_then(|bb| aa.checked_sub(bb)))
        .and_then(|v| v.checked_add(c.re as i128 * n))
        .ok_or(LatticeError::Overflow)?;
    let num_im = a
        .checked_mul(b)
        .and_then(|ab| ab.checked_mul(2))
        .and_then(|v| v.checked_add(c.im as i128 * n))
        .ok_or(LatticeError::Overflow)?;
    // ⌊N · num / N²⌋ = ⌊num / N⌋
    let re = i64::try_from(num_re.div_euclid(n)).map_err(|_| LatticeError::Overflow)?;
    let im = i64::try_from(num_im.div_euclid(n)).map_err(|_| LatticeError::Overflow)?;
    Ok(LatticePoint { re, im, denom: z.denom })
}
