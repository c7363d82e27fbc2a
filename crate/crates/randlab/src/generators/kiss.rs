//! Marsaglia's KISS generator: two 16-bit multiply-with-carry lanes combined
//! with a 3-shift register and a linear congruential generator.
//!
//! Output: `((MWC ^ CONG) + SHR3) mod 2^32` where `MWC = z·2^16 + w`.

/// State of the KISS generator: four 32-bit words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KissState {
    pub z: u32,
    pub w: u32,
    pub jsr: u32,
    pub jcong: u32,
}

impl KissState {
    /// Marsaglia's canonical seed values.
    pub const DEFAULT: KissState = KissState {
        z: 362_436_069,
        w: 521_288_629,
        jsr: 123_456_789,
        jcong: 380_116_160,
    };

    pub fn new() -> Self {
        Self::DEFAULT
    }

    /// Expand a single 32-bit seed into the four state words.
    ///
    /// Zero words would degenerate the MWC lanes and stick the shift
    /// register, so any zero falls back to the canonical value.
    pub fn from_seed(seed: u32) -> Self {
        let mut x = seed;
        let mut next = |i: u32| {
            x = 1_812_433_253u32
                .wrapping_mul(x ^ (x >> 30))
                .wrapping_add(i);
            x
        };
        let z = next(1);
        let w = next(2);
        let jsr = next(3);
        let jcong = next(4);
        KissState {
            z: if z == 0 { Self::DEFAULT.z } else { z },
            w: if w == 0 { Self::DEFAULT.w } else { w },
            jsr: if jsr == 0 { Self::DEFAULT.jsr } else { jsr },
            jcong,
        }
    }

    /// Advance one step and return the next 32-bit output.
    pub fn next_word(&mut self) -> u32 {
        // 36969·(2^16-1) + (2^16-1) < 2^32: the MWC updates cannot overflow.
        self.z = 36_969 * (self.z & 0xFFFF) + (self.z >> 16);
        self.w = 18_000 * (self.w & 0xFFFF) + (self.w >> 16);
        let mwc = (self.z << 16).wrapping_add(self.w);
        self.jcong = 69_069u32.wrapping_mul(self.jcong).wrapping_add(1_234_567);
        self.jsr ^= self.jsr << 17;
        self.jsr ^= self.jsr >> 13;
        self.jsr ^= self.jsr << 5;
        (mwc ^ self.jcong).wrapping_add(self.jsr)
    }
}

impl Default for KissState {
    fn default() -> Self {
        Self::new()
    }
}
