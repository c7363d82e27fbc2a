//! Binary-rank tests over GF(2).
//!
//! Large matrices: 40,000 31×31 (leftmost 31 bits of 31 words) or 32×32
//! matrices; rank counts in cells {≤n-3, n-2, n-1, n} are chi-square-fitted
//! to the analytic rank distribution. 6×8 matrices: six 8-bit rows taken
//! from a sliding bit window of six consecutive words, 100,000 matrices per
//! window position, 25 positions, each yielding a p-value on cells
//! {≤4, 5, 6}, plus one overall KS p-value across the 25.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::{Error, Result};
use crate::stats::{chisq_pvalue, ks_pvalue};

const LARGE_MATRICES: usize = 40_000;
const SMALL_MATRICES: usize = 100_000;
const SMALL_PASSES: u32 = 25;

/// P(rank = r) for a random m×n matrix over GF(2):
/// 2^(r(m+n-r)-mn) · Π_{i=0}^{r-1} (1-2^(i-m))(1-2^(i-n))/(1-2^(i-r)).
pub(crate) fn gf2_rank_prob(m: u32, n: u32, r: u32) -> f64 {
    debug_assert!(r <= m.min(n));
    let exponent = i64::from(r) * i64::from(m + n - r) - i64::from(m) * i64::from(n);
    let mut p = if exponent < -1020 {
        return 0.0;
    } else {
        2f64.powi(exponent as i32)
    };
    for i in 0..r {
        p *= (1.0 - 2f64.powi(i as i32 - m as i32)) * (1.0 - 2f64.powi(i as i32 - n as i32))
            / (1.0 - 2f64.powi(i as i32 - r as i32));
    }
    p
}

/// Rank by basis insertion over packed rows.
fn rank_u32(rows: &[u32]) -> u32 {
    crate::stats::gf2::rank_of_rows(rows) as u32
}

pub fn binary_rank_large(buffer: &ByteBuffer, size: u32) -> Result<TestResult> {
    if size != 31 && size != 32 {
        return Err(Error::Parameter(format!(
            "large binary-rank size must be 31 or 32, got {size}"
        )));
    }
    size_gate(buffer, TestId::Rank)?;
    let mut cursor = buffer.cursor();
    let mut rows = vec![0u32; size as usize];
    // cells: rank <= size-3, size-2, size-1, size
    let mut observed = [0u64; 4];
    for _ in 0..LARGE_MATRICES {
        for row in rows.iter_mut() {
            let w = cursor.next_word32()?;
            *row = if size == 31 { w >> 1 } else { w };
        }
        let rank = rank_u32(&rows);
        let cell = (3 - (size - rank).min(3)) as usize;
        observed[cell] += 1;
    }

    let mut probs = [0.0f64; 4];
    for r in 0..=2u32 {
        probs[(3 - r) as usize] = gf2_rank_prob(size, size, size - r);
    }
    probs[0] = 1.0 - probs[1] - probs[2] - probs[3];

    let n = LARGE_MATRICES as f64;
    let mut stat = 0.0;
    for (cell, &count) in observed.iter().enumerate() {
        let expected = n * probs[cell];
        stat += (count as f64 - expected).powi(2) / expected;
    }

    let mut result = TestResult::new(TestId::Rank);
    let label = format!("{size}x{size}");
    result.push(label.clone(), chisq_pvalue(stat, 3)?);
    result.detail(format!("{label} statistic"), stat);
    result.detail(format!("{label} full-rank count"), observed[3] as f64);
    Ok(result)
}

pub fn binary_rank_6x8(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Rank)?;
    // cells: rank <= 4, 5, 6
    let p6 = gf2_rank_prob(6, 8, 6);
    let p5 = gf2_rank_prob(6, 8, 5);
    let probs = [1.0 - p5 - p6, p5, p6];

    let mut result = TestResult::new(TestId::Rank);
    let mut pass_ps = Vec::with_capacity(SMALL_PASSES as usize);
    let mut rows = [0u32; 6];
    for position in 0..SMALL_PASSES {
        let shift = 24 - position;
        let mut cursor = buffer.cursor();
        let mut observed = [0u64; 3];
        for _ in 0..SMALL_MATRICES {
            for row in rows.iter_mut() {
                *row = (cursor.next_word32()? >> shift) & 0xFF;
            }
            let rank = rank_u32(&rows);
            observed[(rank.max(4) - 4) as usize] += 1;
        }
        let n = SMALL_MATRICES as f64;
        let mut stat = 0.0;
        for (cell, &count) in observed.iter().enumerate() {
            let expected = n * probs[cell];
            stat += (count as f64 - expected).powi(2) / expected;
        }
        let p = chisq_pvalue(stat, 2)?;
        result.push(
            format!("6x8 bits {}-{}", position + 1, position + 8),
            p,
        );
        pass_ps.push(p);
    }
    result.push("6x8 overall", ks_pvalue(&pass_ps)?);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorSpec;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive};

    /// Exact rational evaluation of the rank-distribution product formula.
    fn exact_rank_prob(m: u32, n: u32, r: u32) -> f64 {
        let two = BigInt::from(2);
        let pow2 = |e: u32| -> BigRational { BigRational::from_integer(two.clone().pow(e)) };
        // 2^(r(m+n-r)-mn): negative exponent -> reciprocal
        let e = i64::from(r) * i64::from(m + n - r) - i64::from(m) * i64::from(n);
        let mut p = if e >= 0 {
            pow2(e as u32)
        } else {
            pow2((-e) as u32).recip()
        };
        for i in 0..r {
            let term = |d: u32| -> BigRational {
                // 1 - 2^(i-d) with i < d
                BigRational::one() - pow2(d - i).recip()
            };
            p *= term(m) * term(n) / term(r);
        }
        p.to_f64().unwrap()
    }

    #[test]
    fn rank_probs_match_arbitrary_precision_oracle() {
        for (m, n) in [(31u32, 31u32), (32, 32), (6, 8)] {
            let top = m.min(n);
            let mut total = 0.0;
            for r in top.saturating_sub(3)..=top {
                let got = gf2_rank_prob(m, n, r);
                let want = exact_rank_prob(m, n, r);
                assert!(
                    (got - want).abs() <= 1e-12 * want.max(1e-30),
                    "({m},{n}) r={r}: {got} vs {want}"
                );
                total += got;
            }
            assert!(total > 0.999, "({m},{n}) top ranks should carry the mass");
        }
    }

    #[test]
    fn known_distribution_values() {
        // full-rank probability of a square GF(2) matrix tends to ~0.2888
        assert!((gf2_rank_prob(31, 31, 31) - 0.2887880951).abs() < 1e-9);
        // 6x8: rank 6 ≈ 0.773, rank 5 ≈ 0.2174
        assert!((gf2_rank_prob(6, 8, 6) - 0.773).abs() < 5e-4);
        assert!((gf2_rank_prob(6, 8, 5) - 0.2174).abs() < 5e-4);
    }

    #[test]
    fn all_zero_buffer_saturates() {
        let buffer = ByteBuffer::new(vec![0u8; 5_120_000]).unwrap();
        for size in [31, 32] {
            let result = binary_rank_large(&buffer, size).unwrap();
            assert!(result.pvalues[0].value > 1.0 - 1e-9);
        }
        let result = binary_rank_6x8(&buffer).unwrap();
        for p in &result.pvalues[..25] {
            assert!(p.value > 1.0 - 1e-9, "{}: {}", p.label, p.value);
        }
    }

    #[test]
    fn rejects_bad_size() {
        let buffer = ByteBuffer::new(vec![0u8; 5_120_000]).unwrap();
        assert!(binary_rank_large(&buffer, 16).is_err());
    }

    #[test]
    fn mt_fixture_pvalues_moderate() {
        let buffer = ByteBuffer::new(
            GeneratorSpec::Mt19937 { seed: 2718 }
                .stream_bytes(5_200_000)
                .unwrap(),
        )
        .unwrap();
        for size in [31, 32] {
            let result = binary_rank_large(&buffer, size).unwrap();
            let p = result.pvalues[0].value;
            assert!((0.0001..=0.9999).contains(&p), "{size}: {p}");
        }
        let result = binary_rank_6x8(&buffer).unwrap();
        assert_eq!(result.pvalues.len(), 26);
        let overall = result.pvalues.last().unwrap();
        assert_eq!(overall.label, "6x8 overall");
        assert!((0.0001..=0.9999).contains(&overall.value), "{}", overall.value);
    }
}
