//! SplitMix64, used both as a counter-based hash (`mix(seed ^ i)`) and as a
//! sequential stream.

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for the state `x` (the state is advanced by the
/// golden gamma before mixing).
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = splitmix64(self.state);
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        out
    }

    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }
}

/// Yields single bits, least significant first, 64 per SplitMix64 draw.
#[derive(Debug, Clone)]
pub struct BitStream {
    source: SplitMix64,
    word: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        Self { source: SplitMix64::new(seed), word: 0, left: 0 }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.source.next_u64();
            self.left = 64;
        }
        let bit = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        bit
    }
}
