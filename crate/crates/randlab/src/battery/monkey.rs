//! Sparse-occupancy ("monkey") tests: BITSTREAM, OPSO, OQSO and DNA.
//!
//! Each pass feeds 2^21 overlapping 20-bit words into a 2^20-cell occupancy
//! table and z-scores the number of never-seen words against the occupancy
//! law: mean 2^20·e^(-2), with the classical standard deviations 428 (bit
//! overlap), 290, 295 and 339 (letter-composed).
//!
//! BITSTREAM slides one bit at a time over twenty consecutive stream
//! segments. OPSO/OQSO/DNA compose 20-bit words from 10-, 5- and 2-bit
//! letters taken at a fixed bit position of consecutive 32-bit words, one
//! pass per admissible position (23, 28 and 31 passes).

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::generators::Mt19937State;
use crate::stats::normal_cdf;

const CELL_BITS: u32 = 20;
const CELLS: usize = 1 << CELL_BITS;
const N_WORDS: u64 = 1 << 21;

/// Parameters of one monkey test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonkeyConfig {
    pub test: TestId,
    /// Bits per letter; BITSTREAM uses whole 20-bit windows.
    pub letter_bits: u32,
    /// Letters per 20-bit word.
    pub letters_per_word: u32,
    /// Words thrown per pass.
    pub n_words: u64,
    /// Expected missing words.
    pub mean: f64,
    /// Standard deviation of missing words.
    pub sigma: f64,
}

impl MonkeyConfig {
    fn new(test: TestId, letter_bits: u32, sigma: f64) -> Self {
        let letters_per_word = CELL_BITS / letter_bits;
        debug_assert_eq!(letter_bits * letters_per_word, CELL_BITS);
        MonkeyConfig {
            test,
            letter_bits,
            letters_per_word,
            n_words: N_WORDS,
            mean: CELLS as f64 * (-2.0f64).exp(),
            sigma,
        }
    }

    pub fn bitstream() -> Self {
        Self::new(TestId::Bitstream, 20, 428.0)
    }

    pub fn opso() -> Self {
        Self::new(TestId::Opso, 10, 290.0)
    }

    pub fn oqso() -> Self {
        Self::new(TestId::Oqso, 5, 295.0)
    }

    pub fn dna() -> Self {
        Self::new(TestId::Dna, 2, 339.0)
    }

    /// Number of passes: twenty stream segments for BITSTREAM, one per
    /// admissible letter position otherwise.
    pub fn passes(&self) -> u32 {
        if self.test == TestId::Bitstream {
            20
        } else {
            33 - self.letter_bits
        }
    }
}

struct Occupancy {
    bits: Vec<u64>,
}

impl Occupancy {
    fn new() -> Self {
        Occupancy {
            bits: vec![0u64; CELLS / 64],
        }
    }

    fn clear(&mut self) {
        self.bits.fill(0);
    }

    #[inline]
    fn mark(&mut self, word: u32) {
        let w = word as usize;
        self.bits[w >> 6] |= 1u64 << (w & 63);
    }

    fn missing(&self) -> u64 {
        CELLS as u64 - self.bits.iter().map(|w| u64::from(w.count_ones())).sum::<u64>()
    }
}

pub fn monkey_test(buffer: &ByteBuffer, config: &MonkeyConfig) -> Result<TestResult> {
    size_gate(buffer, config.test)?;
    let mut result = TestResult::new(config.test);
    let mut occupancy = Occupancy::new();

    if config.test == TestId::Bitstream {
        // sequential segments; each pass reads 19 warm-up bits then 2^21 more
        for segment in 0..config.passes() {
            let mut cursor = buffer.cursor();
            cursor.seek_bit(u64::from(segment) * N_WORDS)?;
            occupancy.clear();
            let mut window = 0u32;
            for _ in 0..CELL_BITS - 1 {
                window = (window << 1) | u32::from(cursor.next_bit()?);
            }
            for _ in 0..N_WORDS {
                window = ((window << 1) | u32::from(cursor.next_bit()?)) & (CELLS as u32 - 1);
                occupancy.mark(window);
            }
            let missing = occupancy.missing();
            let label = format!("segment {}", segment + 1);
            result.detail(format!("{label} missing"), missing as f64);
            result.push(label, pass_pvalue(config, missing));
        }
    } else {
        let mask = (1u32 << config.letter_bits) - 1;
        for position in 0..config.passes() {
            let shift = 32 - config.letter_bits - position;
            let mut cursor = buffer.cursor();
            occupancy.clear();
            let mut window = 0u32;
            for _ in 0..config.letters_per_word - 1 {
                window = (window << config.letter_bits) | ((cursor.next_word32()? >> shift) & mask);
            }
            for _ in 0..N_WORDS {
                let letter = (cursor.next_word32()? >> shift) & mask;
                window = ((window << config.letter_bits) | letter) & (CELLS as u32 - 1);
                occupancy.mark(window);
            }
            let missing = occupancy.missing();
            let label = format!(
                "bits {}-{}",
                position + 1,
                position + config.letter_bits
            );
            result.detail(format!("{label} missing"), missing as f64);
            result.push(label, pass_pvalue(config, missing));
        }
    }
    Ok(result)
}

fn pass_pvalue(config: &MonkeyConfig, missing: u64) -> f64 {
    normal_cdf((missing as f64 - config.mean) / config.sigma)
}

/// Monte Carlo oracle: mean and standard deviation of the missing-word count
/// over `streams` independent MT19937 streams, one first-pass each.
pub fn calibrate_missing_words(config: &MonkeyConfig, streams: u32, seed: u32) -> (f64, f64) {
    let bytes_needed = if config.test == TestId::Bitstream {
        ((N_WORDS + 19).div_ceil(8)) as usize
    } else {
        ((N_WORDS + u64::from(config.letters_per_word) - 1) * 4) as usize
    };
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for s in 0..streams {
        let mut mt = Mt19937State::new(seed.wrapping_add(s));
        let mut bytes = Vec::with_capacity(bytes_needed + 4);
        while bytes.len() < bytes_needed {
            bytes.extend_from_slice(&mt.next_word().to_be_bytes());
        }
        bytes.truncate(bytes_needed);
        let buffer = ByteBuffer::new(bytes).expect("nonempty");
        let missing = single_pass_missing(&buffer, config).expect("sized exactly");
        sum += missing as f64;
        sumsq += (missing as f64) * (missing as f64);
    }
    let n = f64::from(streams);
    let mean = sum / n;
    let var = (sumsq - n * mean * mean) / (n - 1.0);
    (mean, var.sqrt())
}

/// First pass only (segment 1 / leftmost letter position).
fn single_pass_missing(buffer: &ByteBuffer, config: &MonkeyConfig) -> Result<u64> {
    let mut occupancy = Occupancy::new();
    let mut cursor = buffer.cursor();
    let mut window = 0u32;
    if config.test == TestId::Bitstream {
        for _ in 0..CELL_BITS - 1 {
            window = (window << 1) | u32::from(cursor.next_bit()?);
        }
        for _ in 0..N_WORDS {
            window = ((window << 1) | u32::from(cursor.next_bit()?)) & (CELLS as u32 - 1);
            occupancy.mark(window);
        }
    } else {
        let mask = (1u32 << config.letter_bits) - 1;
        let shift = 32 - config.letter_bits;
        for _ in 0..config.letters_per_word - 1 {
            window = (window << config.letter_bits) | ((cursor.next_word32()? >> shift) & mask);
        }
        for _ in 0..N_WORDS {
            let letter = (cursor.next_word32()? >> shift) & mask;
            window = ((window << config.letter_bits) | letter) & (CELLS as u32 - 1);
            occupancy.mark(window);
        }
    }
    Ok(occupancy.missing())
}
