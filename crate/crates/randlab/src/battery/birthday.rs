//! Birthday-spacings test: 512 birthdays in a year of 2^24 days; the number
//! of duplicated spacing values is Poisson with λ = m³/(4n) = 2. Five hundred
//! repetitions per pass are chi-square-fitted to Poisson(2); nine passes use
//! bit windows 1-24 through 9-32 of each word, plus a KS over the passes.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::{chisq_pvalue, ks_pvalue, poisson_pmf};

const BIRTHDAYS: usize = 512;
const DAY_BITS: u32 = 24;
const REPS: usize = 500;
const PASSES: u32 = 9;
/// λ = m³/(4n) with m = 512 birthdays and n = 2^24 days.
const LAMBDA: f64 = (BIRTHDAYS * BIRTHDAYS * BIRTHDAYS) as f64 / (4u64 << DAY_BITS) as f64;
/// Tally cells 0..5 and ≥6.
const CELLS: usize = 7;

/// Duplicated spacing values in one repetition: sort the birthdays, take
/// adjacent differences, count distinct values that occur more than once.
pub(crate) fn duplicate_spacings(birthdays: &mut [u32]) -> u32 {
    birthdays.sort_unstable();
    let mut spacings: Vec<u32> = birthdays.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_unstable();
    let mut duplicates = 0u32;
    let mut i = 0;
    while i < spacings.len() {
        let mut j = i + 1;
        while j < spacings.len() && spacings[j] == spacings[i] {
            j += 1;
        }
        if j - i > 1 {
            duplicates += 1;
        }
        i = j;
    }
    duplicates
}

pub fn birthday_spacings(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Birthday)?;
    debug_assert!((LAMBDA - 2.0).abs() < 1e-12);

    let mut expected = [0.0f64; CELLS];
    for (k, e) in expected.iter_mut().enumerate().take(CELLS - 1) {
        *e = REPS as f64 * poisson_pmf(k as u32, LAMBDA);
    }
    expected[CELLS - 1] = REPS as f64 - expected[..CELLS - 1].iter().sum::<f64>();

    let mut result = TestResult::new(TestId::Birthday);
    let mut pass_ps = Vec::with_capacity(PASSES as usize);
    let mut birthdays = vec![0u32; BIRTHDAYS];
    for offset in 0..PASSES {
        let shift = 32 - DAY_BITS - offset;
        let mut cursor = buffer.cursor();
        let mut observed = [0u64; CELLS];
        for _ in 0..REPS {
            for b in birthdays.iter_mut() {
                *b = (cursor.next_word32()? >> shift) & ((1 << DAY_BITS) - 1);
            }
            let dup = duplicate_spacings(&mut birthdays) as usize;
            observed[dup.min(CELLS - 1)] += 1;
        }
        let mut stat = 0.0;
        for (cell, &count) in observed.iter().enumerate() {
            stat += (count as f64 - expected[cell]).powi(2) / expected[cell];
        }
        let p = chisq_pvalue(stat, (CELLS - 1) as u32)?;
        result.push(
            format!("bits {}-{}", offset + 1, offset + DAY_BITS),
            p,
        );
        pass_ps.push(p);
    }
    result.push("ks", ks_pvalue(&pass_ps)?);
    result.detail("lambda", LAMBDA);
    Ok(result)
}
