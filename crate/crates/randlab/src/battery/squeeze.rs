//! Squeeze test: starting from k = 2^31, repeatedly replace k by ⌈k·U⌉ and
//! count the multiplications needed to reach 1. Iteration counts are tallied
//! into 43 cells (≤6, 7..47, ≥48) and chi-square-fitted against calibrated
//! cell probabilities.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::generators::Mt19937State;
use crate::stats::chisq_pvalue;

const REPS: u64 = 100_000;
const START: f64 = 2_147_483_648.0; // 2^31
const MAX_ITER: u32 = 48;

/// Number of tally cells: j ≤ 6, j = 7..47 individually, j ≥ 48.
pub const SQUEEZE_CELLS: usize = 43;

/// Cell probabilities under the uniform null.
///
/// Produced by `examples/calibrate.rs squeeze`: 10^8 Monte Carlo repetitions
/// of the squeeze chain driven by MT19937 (seed 987654321). Regenerate with
/// `cargo run --release --example calibrate -- squeeze 100000000`.
pub const SQUEEZE_CELL_PROBS: [f64; SQUEEZE_CELLS] = [
    2.0760000000e-5, 5.7780000000e-5, 1.7532000000e-4, 4.6975000000e-4,
    1.1079200000e-3, 2.3783400000e-3, 4.6103500000e-3, 8.2359600000e-3,
    1.3644200000e-2, 2.0975920000e-2, 3.0194070000e-2, 4.0829410000e-2,
    5.2023230000e-2, 6.2826080000e-2, 7.1998660000e-2, 7.8738160000e-2,
    8.2061090000e-2, 8.1957960000e-2, 7.8461040000e-2, 7.2196430000e-2,
    6.3922850000e-2, 5.4702930000e-2, 4.5200560000e-2, 3.6144620000e-2,
    2.7981730000e-2, 2.1064210000e-2, 1.5373260000e-2, 1.0938210000e-2,
    7.5664800000e-3, 5.1198300000e-3, 3.3880200000e-3, 2.1745100000e-3,
    1.3768500000e-3, 8.4925000000e-4, 5.1453000000e-4, 3.0731000000e-4,
    1.7966000000e-4, 1.0332000000e-4, 5.8340000000e-5, 3.2770000000e-5,
    1.7980000000e-5, 9.6700000000e-6, 1.0680000000e-5,
];

/// One squeeze repetition: multiplications until k reaches 1 (capped at 48,
/// where the tally lumps anyway; the cap also bounds degenerate streams
/// whose uniforms pin k in place).
fn squeeze_iterations(mut next_word: impl FnMut() -> Result<u32>) -> Result<u32> {
    let mut k = START;
    let mut j = 0u32;
    while k > 1.0 && j < MAX_ITER {
        k = (k * super::to_unit(next_word()?)).ceil();
        j += 1;
    }
    Ok(j)
}

#[inline]
fn cell_of(j: u32) -> usize {
    (j.clamp(6, 48) - 6) as usize
}

pub fn squeeze(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Squeeze)?;
    let mut cursor = buffer.cursor();
    let mut observed = [0u64; SQUEEZE_CELLS];
    for _ in 0..REPS {
        let j = squeeze_iterations(|| cursor.next_word32())?;
        observed[cell_of(j)] += 1;
    }
    let mut stat = 0.0;
    for (cell, &count) in observed.iter().enumerate() {
        let expected = REPS as f64 * SQUEEZE_CELL_PROBS[cell];
        stat += (count as f64 - expected).powi(2) / expected;
    }
    let mut result = TestResult::new(TestId::Squeeze);
    result.push("chisq", chisq_pvalue(stat, (SQUEEZE_CELLS - 1) as u32)?);
    result.detail("statistic", stat);
    Ok(result)
}

/// Monte Carlo oracle for the cell probabilities: `reps` repetitions of the
/// squeeze chain driven by MT19937.
pub fn calibrate_squeeze_cells(reps: u64, seed: u32) -> [f64; SQUEEZE_CELLS] {
    let mut mt = Mt19937State::new(seed);
    let mut counts = [0u64; SQUEEZE_CELLS];
    for _ in 0..reps {
        let j = squeeze_iterations(|| Ok(mt.next_word())).expect("infinite source");
        counts[cell_of(j)] += 1;
    }
    let mut probs = [0.0f64; SQUEEZE_CELLS];
    for (p, &c) in probs.iter_mut().zip(counts.iter()) {
        *p = c as f64 / reps as f64;
    }
    probs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorSpec;

    #[test]
    fn cell_probs_sum_to_one() {
        let total: f64 = SQUEEZE_CELL_PROBS.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "sum = {total}");
    }

    #[test]
    fn frozen_cell_probs_match_fresh_monte_carlo() {
        // independent sample (different seed), 10^6 reps; each cell within
        // 6 standard errors of the frozen value
        let reps = 1_000_000u64;
        let fresh = calibrate_squeeze_cells(reps, 0xACCE55);
        for (cell, (&frozen, &mc)) in SQUEEZE_CELL_PROBS.iter().zip(fresh.iter()).enumerate() {
            let se = (frozen * (1.0 - frozen) / reps as f64).sqrt().max(1e-9);
            assert!(
                (frozen - mc).abs() < 6.0 * se + 1e-6,
                "cell {cell}: frozen {frozen} vs fresh {mc} (se {se})"
            );
        }
    }

    #[test]
    fn degenerate_uniforms_near_one_land_in_top_cell() {
        // all-ones words: U = 1 - 2^-32, k never decreases, cap at 48
        let j = squeeze_iterations(|| Ok(u32::MAX)).unwrap();
        assert_eq!(j, 48);
        // all-zero words: k drops to 0 after one multiplication
        let j = squeeze_iterations(|| Ok(0)).unwrap();
        assert_eq!(j, 1);
    }

    #[test]
    fn all_zero_buffer_saturates() {
        let buffer = ByteBuffer::new(vec![0u8; 400_000]).unwrap();
        let result = squeeze(&buffer).unwrap();
        let p = result.pvalues[0].value;
        assert!(p > 1.0 - 1e-9, "p = {p}");
    }

    #[test]
    fn mt_fixture_pvalue_moderate() {
        let buffer = ByteBuffer::new(
            GeneratorSpec::Mt19937 { seed: 8 }
                .stream_bytes(12_000_000)
                .unwrap(),
        )
        .unwrap();
        let result = squeeze(&buffer).unwrap();
        let p = result.pvalues[0].value;
        assert!((0.0001..=0.9999).contains(&p), "p = {p}");
    }
}
