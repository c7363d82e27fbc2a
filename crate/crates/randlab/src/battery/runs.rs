//! Runs test: counts maximal ascending and descending runs by length in
//! 10,000 uniforms and forms the classical quadratic-form statistic against
//! the Levene–Wolfowitz covariance constants. Two passes, runs-up and
//! runs-down each, four p-values total.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::chisq_pvalue;

const N: usize = 10_000;
const PASSES: usize = 2;

/// Inverse-covariance weights for run counts of length 1..5 and ≥6.
const A: [[f64; 6]; 6] = [
    [4529.4, 9044.9, 13568.0, 18091.0, 22615.0, 27892.0],
    [9044.9, 18097.0, 27139.0, 36187.0, 45234.0, 55789.0],
    [13568.0, 27139.0, 40721.0, 54281.0, 67852.0, 83685.0],
    [18091.0, 36187.0, 54281.0, 72414.0, 90470.0, 111580.0],
    [22615.0, 45234.0, 67852.0, 90470.0, 113262.0, 139476.0],
    [27892.0, 55789.0, 83685.0, 111580.0, 139476.0, 172860.0],
];

/// Expected run counts per element for lengths 1..5 and ≥6.
const B: [f64; 6] = [
    1.0 / 6.0,
    5.0 / 24.0,
    11.0 / 120.0,
    19.0 / 720.0,
    29.0 / 5040.0,
    1.0 / 840.0,
];

pub fn runs(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Runs)?;
    let mut cursor = buffer.cursor();
    let mut result = TestResult::new(TestId::Runs);

    for pass in 1..=PASSES {
        let values: Vec<f64> = (0..N)
            .map(|_| cursor.next_word32().map(super::to_unit))
            .collect::<Result<_>>()?;
        let up = count_runs(&values, true);
        let down = count_runs(&values, false);
        for (direction, counts) in [("up", up), ("down", down)] {
            let stat = quadratic_form(&counts);
            result.push(format!("pass {pass} {direction}"), chisq_pvalue(stat, 6)?);
            result.detail(format!("pass {pass} {direction} statistic"), stat);
        }
    }
    Ok(result)
}

/// Count maximal runs by length (1..5, ≥6). Ties extend an ascending run:
/// "up" means the next value is ≥ the current one.
pub(crate) fn count_runs(values: &[f64], ascending: bool) -> [u64; 6] {
    let mut counts = [0u64; 6];
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() {
            let rises = values[j + 1] >= values[j];
            if rises == ascending {
                j += 1;
            } else {
                break;
            }
        }
        let len = (j - i + 1).min(6);
        counts[len - 1] += 1;
        i = j + 1;
    }
    counts
}

fn quadratic_form(counts: &[u64; 6]) -> f64 {
    let n = N as f64;
    let mut stat = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            let di = counts[i] as f64 - n * B[i];
            let dj = counts[j] as f64 - n * B[j];
            stat += di * dj * A[i][j];
        }
    }
    (stat / (n - 6.0)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorSpec;

    #[test]
    fn strictly_increasing_stream_saturates() {
        // words 0,1,2,...: one enormous ascending run
        let mut bytes = Vec::with_capacity(2 * N * 4);
        for w in 0..(2 * N as u32) {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        let buffer = ByteBuffer::new(bytes).unwrap();
        let result = runs(&buffer).unwrap();
        for p in &result.pvalues {
            assert!(
                p.value > 1.0 - 1e-9 || p.value < 1e-9,
                "{}: {}",
                p.label,
                p.value
            );
        }
    }

    #[test]
    fn alternating_stream_counts_match_naive_oracle() {
        // high/low alternation: every ascending and descending run has length 1
        // except pairings at the ends of each sweep direction
        let values: Vec<f64> = (0..100)
            .map(|i| if i % 2 == 0 { 0.25 } else { 0.75 })
            .collect();
        // naive oracle: walk and segment
        let naive = |asc: bool| -> Vec<usize> {
            let mut lens = Vec::new();
            let mut cur = 1usize;
            for k in 1..values.len() {
                let rises = values[k] >= values[k - 1];
                if rises == asc {
                    cur += 1;
                } else {
                    lens.push(cur);
                    cur = 1;
                }
            }
            lens.push(cur);
            lens
        };
        for asc in [true, false] {
            let counts = count_runs(&values, asc);
            let oracle = naive(asc);
            for len in 1..=6 {
                let want = oracle
                    .iter()
                    .filter(|&&l| l.min(6) == len)
                    .count() as u64;
                assert_eq!(counts[len - 1], want, "asc={asc} len={len}");
            }
        }
    }

    #[test]
    fn ties_count_as_up() {
        let values = vec![0.5, 0.5, 0.5, 0.2];
        // ascending: run of 3 (ties extend), then 1
        assert_eq!(count_runs(&values, true), [1, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn mt_fixture_pvalues_moderate() {
        let buffer = ByteBuffer::new(
            GeneratorSpec::Mt19937 { seed: 42 }
                .stream_bytes(2 * N * 4)
                .unwrap(),
        )
        .unwrap();
        let result = runs(&buffer).unwrap();
        assert_eq!(result.pvalues.len(), 4);
        for p in &result.pvalues {
            assert!(
                (0.0001..=0.9999).contains(&p.value),
                "{}: {}",
                p.label,
                p.value
            );
        }
    }
}
