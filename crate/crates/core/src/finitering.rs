//! Exhaustive Mandelstuff over finite rings, the floor-discretized lattice,
//! and the Pollard ρ factorizer built on the same quadratic map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{lattice_step, Exponent, FiniteRing, FiniteRingError, LatticeError, LatticePoint};
use crate::dynamics::Verdict;
use crate::exec::Executor;

/// Largest ring the exhaustive enumeration accepts.
pub const MAX_RING_SIZE: u64 = 10_000_000;

/// Every chunk allocates one ring-sized visited buffer, so large rings use
/// at most `ENUM_MAX_CHUNKS` chunks.
const ENUM_CHUNK: u64 = 1024;
const ENUM_MAX_CHUNKS: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteError {
    #[error(transparent)]
    Ring(#[from] FiniteRingError),
    #[error("ring of size {0} exceeds the exhaustive limit")]
    TooLarge(u64),
    #[error("escape point {0} is not an element of a ring of size {1}")]
    EscapeOutOfRange(u64, u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMandelReport {
    pub ring: FiniteRing,
    pub exponent: u64,
    pub frobenius: bool,
    pub escape_point: u64,
    pub members: Vec<u64>,
    pub member_count: usize,
    /// `p² − p + 1` when the ring has `p²` elements.
    pub lemma_count: Option<u64>,
    pub matches_lemma: Option<bool>,
}

/// `(pre-period, period)` of the orbit of `0` under `x ↦ x^e + c`.
pub fn orbit_structure(ring: &FiniteRing, e: u64, c: u64) -> (u64, u64) {
    let n = ring.size() as usize;
    let mut first_seen = vec![u64::MAX; n];
    let mut z = 0u64;
    let mut k = 0u64;
    loop {
        let seen = first_seen[z as usize];
        if seen != u64::MAX {
            return (seen, k - seen);
        }
        first_seen[z as usize] = k;
        z = ring.add(ring.pow(z, e), c);
        k += 1;
    }
}

/// Does `b` appear in the eventually periodic orbit of `0`? `stamp` marks
/// visited elements with `tag`.
fn orbit_hits(ring: &FiniteRing, e: u64, c: u64, b: u64, stamp: &mut [u64], tag: u64) -> bool {
    let mut z = 0u64;
    loop {
        if z == b {
            return true;
        }
        if stamp[z as usize] == tag {
            return false;
        }
        stamp[z as usize] = tag;
        z = ring.add(ring.pow(z, e), c);
    }
}

/// Members `c` whose orbit of `0` under `x ↦ x^e + c` never reaches `b`.
pub fn enumerate_mandelstuff(
    ring: FiniteRing,
    exponent: Exponent,
    b: u64,
    exec: &Executor,
) -> Result<FiniteMandelReport, FiniteError> {
    let n = ring.size();
    if n > MAX_RING_SIZE {
        return Err(FiniteError::TooLarge(n));
    }
    if b >= n {
        return Err(FiniteError::EscapeOutOfRange(b, n));
    }
    let e = exponent.resolve(&ring)?;
    let chunk = ENUM_CHUNK.max(n.div_ceil(ENUM_MAX_CHUNKS));
    let chunks = n.div_ceil(chunk) as usize;
    let members: Vec<u64> = exec
        .map(chunks, |ci| {
            let mut stamp = vec![u64::MAX; n as usize];
            let lo = ci as u64 * chunk;
            (lo..(lo + chunk).min(n)).filter(|&c| !orbit_hits(&ring, e, c, b, &mut stamp, c)).collect::<Vec<u64>>()
        })
        .concat();
    let p = ring.frobenius_exponent().filter(|p| p * p == n);
    let lemma_count = p.map(|p| p * p - p + 1);
    Ok(FiniteMandelReport {
        ring,
        exponent: e,
        frobenius: matches!(exponent, Exponent::Frobenius),
        escape_point: b,
        member_count: members.len(),
        matches_lemma: lemma_count.map(|l| l == members.len() as u64),
        lemma_count,
        members,
    })
}

/// Frobenius Mandelstuff over `GF(p²)`.
pub fn enumerate_gf_variant(p: u64, b: u64, exec: &Executor) -> Result<FiniteMandelReport, FiniteError> {
    let ring = FiniteRing::gfp2(p)?;
    enumerate_mandelstuff(ring, Exponent::Frobenius, b, exec)
}

/// Is `x ↦ x^e + c` a bijection of the ring?
pub fn is_permutation(ring: &FiniteRing, e: u64, c: u64) -> bool {
    let n = ring.size() as usize;
    let mut hit = vec![false; n];
    for x in 0..n as u64 {
        let y = ring.add(ring.pow(x, e), c) as usize;
        if hit[y] {
            return false;
        }
        hit[y] = true;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub denominator: i64,
    pub max_iter: u32,
    /// Numerators `(k, l)` of members `c = (k + il)/N` with `|k|, |l| ≤ 2N`.
    pub members: Vec<(i64, i64)>,
    pub member_count: usize,
}

/// Escape test in `(Z + iZ)/N` with `B = {|z| > 2}`.
pub fn lattice_classify(c: LatticePoint, max_iter: u32) -> Result<Verdict, LatticeError> {
    let mut z = LatticePoint::zero(c.denom)?;
    for k in 0..=max_iter {
        if z.norm_exceeds(2) {
            return Ok(Verdict::Escaped(k));
        }
        if k < max_iter {
            z = lattice_step(z, c)?;
        }
    }
    Ok(Verdict::Bounded(max_iter))
}

pub fn enumerate_lattice(denominator: i64, max_iter: u32, exec: &Executor) -> Result<LatticeReport, FiniteError> {
    LatticePoint::zero(denominator)?;
    let side = (4 * denominator + 1) as usize;
    let rows = exec.map(side, |row| {
        let l = row as i64 - 2 * denominator;
        let mut out = Vec::new();
        for k in -2 * denominator..=2 * denominator {
            let c = LatticePoint { re: k, im: l, denom: denominator };
            match lattice_classify(c, max_iter) {
                Ok(v) if v.is_bounded() => out.push(Ok((k, l))),
                Ok(_) => {}
                Err(e) => out.push(Err(e)),
            }
        }
        out
    });
    let members = rows.into_iter().flatten().collect::<Result<Vec<_>, _>>()?;
    Ok(LatticeReport { denominator, max_iter, member_count: members.len(), members })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PollardError {
    #[error("n = {0} is too small; need n ≥ 4")]
    TooSmall(u64),
    #[error("cycle closed without a proper factor (gcd = n); retry with another c")]
    Failure,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floyd cycle detection on `x ↦ x² + c (mod n)` from `x0`. Even `n`
/// returns 2 directly.
pub fn pollard_rho(n: u64, c: u64, x0: u64) -> Result<u64, PollardError> {
    if n < 4 {
        return Err(PollardError::TooSmall(n));
    }
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let (mut tortoise, mut hare) = (x0 % n, x0 % n);
    loop {
        tortoise = f(tortoise);
        hare = f(f(hare));
        let d = gcd(tortoise.abs_diff(hare), n);
        if d == n {
            return Err(PollardError::Failure);
        }
        if d > 1 {
            return Ok(d);
        }
    }
}
