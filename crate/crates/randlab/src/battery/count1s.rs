//! Count-the-1's test. Each byte maps to one of five letters by its bit
//! count (0-2, 3, 4, 5, 6-8); overlapping 5-letter words are counted and the
//! statistic is Q5 - Q4, the difference of the naive chi-squares on 5- and
//! 4-letter word counts, which is asymptotically chi-square with
//! 5^5 - 5^4 = 2500 degrees of freedom.
//!
//! Two modes: a stream of bytes, and one designated byte position per 32-bit
//! word (all four positions).

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::chisq_pvalue;

const WORDS: usize = 256_000;
const LETTERS: usize = WORDS + 4;

/// Letter probabilities: sums of C(8,k)/256 over each bit-count class.
const LETTER_PROBS: [f64; 5] = [
    37.0 / 256.0,
    56.0 / 256.0,
    70.0 / 256.0,
    56.0 / 256.0,
    37.0 / 256.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count1sMode {
    /// Letters from consecutive stream bytes.
    Stream,
    /// Letters from one designated byte of each 32-bit word; all four byte
    /// positions are tested.
    SpecificBytes,
}

#[inline]
fn letter_of(byte: u8) -> usize {
    match byte.count_ones() {
        0..=2 => 0,
        3 => 1,
        4 => 2,
        5 => 3,
        _ => 4,
    }
}

/// Q5 - Q4 p-value over one letter sequence of length `LETTERS`.
fn qstat_pvalue(letters: &[u8]) -> Result<(f64, f64)> {
    debug_assert_eq!(letters.len(), LETTERS);
    let mut counts5 = vec![0u32; 3125];
    let mut counts4 = vec![0u32; 625];
    let mut idx5 = 0usize;
    for (j, &l) in letters.iter().enumerate() {
        idx5 = (idx5 % 625) * 5 + l as usize;
        if j >= 4 {
            counts5[idx5] += 1;
            counts4[idx5 / 5] += 1; // first four letters of the window
        }
    }

    let n = WORDS as f64;
    let mut q5 = 0.0;
    for (word, &count) in counts5.iter().enumerate() {
        let expected = n * word_prob(word, 5);
        q5 += (f64::from(count) - expected).powi(2) / expected;
    }
    let mut q4 = 0.0;
    for (word, &count) in counts4.iter().enumerate() {
        let expected = n * word_prob(word, 4);
        q4 += (f64::from(count) - expected).powi(2) / expected;
    }
    let stat = (q5 - q4).max(0.0);
    Ok((chisq_pvalue(stat, 2500)?, stat))
}

/// Probability of a base-5 word under the letter distribution.
fn word_prob(mut word: usize, len: u32) -> f64 {
    let mut p = 1.0;
    for _ in 0..len {
        p *= LETTER_PROBS[word % 5];
        word /= 5;
    }
    p
}

pub fn count_the_1s(buffer: &ByteBuffer, mode: Count1sMode) -> Result<TestResult> {
    size_gate(buffer, TestId::Count1s)?;
    let mut result = TestResult::new(TestId::Count1s);
    match mode {
        Count1sMode::Stream => {
            let letters: Vec<u8> = buffer.as_slice()[..LETTERS]
                .iter()
                .map(|&b| letter_of(b) as u8)
                .collect();
            let (p, stat) = qstat_pvalue(&letters)?;
            result.push("stream", p);
            result.detail("stream statistic", stat);
        }
        Count1sMode::SpecificBytes => {
            for position in 0..4u32 {
                let mut cursor = buffer.cursor();
                let shift = 24 - 8 * position;
                let mut letters = Vec::with_capacity(LETTERS);
                for _ in 0..LETTERS {
                    let w = cursor.next_word32()?;
                    letters.push(letter_of((w >> shift) as u8) as u8);
                }
                let (p, stat) = qstat_pvalue(&letters)?;
                result.push(format!("byte {}", position + 1), p);
                result.detail(format!("byte {} statistic", position + 1), stat);
            }
        }
    }
    Ok(result)
}
