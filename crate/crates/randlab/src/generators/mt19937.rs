//! MT19937 Mersenne Twister, the standard 32-bit variant.

const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_B0DF;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7FFF_FFFF;

/// State vector of 624 words plus the read index.
///
/// The vector is regenerated exactly when the index reaches 624.
#[derive(Clone)]
pub struct Mt19937State {
    v: [u32; N],
    idx: usize,
}

impl Mt19937State {
    /// Initialize from a 32-bit seed with the standard recurrence.
    pub fn new(seed: u32) -> Self {
        let mut v = [0u32; N];
        v[0] = seed;
        for i in 1..N {
            v[i] = 1_812_433_253u32
                .wrapping_mul(v[i - 1] ^ (v[i - 1] >> 30))
                .wrapping_add(i as u32);
        }
        Mt19937State { v, idx: N }
    }

    /// Next tempered 32-bit output.
    pub fn next_word(&mut self) -> u32 {
        if self.idx == N {
            self.twist();
        }
        let mut y = self.v[self.idx];
        self.idx += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9D2C_5680;
        y ^= (y << 15) & 0xEFC6_0000;
        y ^ (y >> 18)
    }

    fn twist(&mut self) {
        for i in 0..N {
            let x = (self.v[i] & UPPER_MASK) | (self.v[(i + 1) % N] & LOWER_MASK);
            let mut xa = x >> 1;
            if x & 1 == 1 {
                xa ^= MATRIX_A;
            }
            self.v[i] = self.v[(i + M) % N] ^ xa;
        }
        self.idx = 0;
    }
}

impl std::fmt::Debug for Mt19937State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Mt19937State")
            .field("idx", &self.idx)
            .finish_non_exhaustive()
    }
}
