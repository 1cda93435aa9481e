//! Deterministic bit source for domain generation and probing.

/// SplitMix64, bit-exact with the reference constants.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by rejection.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

impl Iterator for SplitMix64 {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_u64())
    }
}

/// Infinite stream of bits, most significant bit of each word first.
#[derive(Debug, Clone)]
pub struct BitStream {
    rng: SplitMix64,
    word: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        BitStream {
            rng: SplitMix64::new(seed),
            word: 0,
            left: 0,
        }
    }
}

impl Iterator for BitStream {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        self.left -= 1;
        Some(self.word >> self.left & 1 == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_words() {
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn bits_are_msb_first() {
        let word = SplitMix64::new(7).next_u64();
        let bits: Vec<bool> = BitStream::new(7).take(64).collect();
        let rebuilt = bits.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b));
        assert_eq!(rebuilt, word);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = SplitMix64::new(42);
        for bound in 1..50 {
            assert!(r.next_below(bound) < bound);
        }
    }
}
