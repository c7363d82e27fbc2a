//! Overlapping 5-permutation test.
//!
//! Each overlapping window of five consecutive 32-bit words is classified by
//! its ordering pattern (120 classes, ties broken by position). Window counts
//! follow a singular Gaussian law; the quadratic form in the pseudo-inverse
//! of their covariance is chi-square with rank-many degrees of freedom.
//!
//! The covariance is built here by exhaustive enumeration: for window gaps
//! k = 1..4, every permutation of 5+k distinct values contributes one joint
//! (pattern, pattern) observation with weight 1/(5+k)!. The pseudo-inverse
//! comes from a Jacobi eigendecomposition with small eigenvalues zeroed.
//!
//! The enumerated covariance has rank 96, not the 99 sometimes quoted for
//! this test: the count vector carries 24 asymptotically deterministic
//! functionals (the total plus 23 independent head-vs-tail 4-pattern balance
//! constraints), and the eigenvalue spectrum drops from 2.2e-3 straight to
//! the 1e-18 noise floor. Degrees of freedom follow the actual rank.

use std::sync::OnceLock;

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::{chisq_pvalue, sym::jacobi_eigen};

const PATTERNS: usize = 120;
const WORDS_PER_PASS: usize = 1_000_000;
const PASSES: usize = 2;
const EXPECTED_RANK: usize = 96;

/// Lehmer index of the ordering pattern of five values; equal values compare
/// by position (earlier index = smaller).
#[inline]
pub(crate) fn pattern_index(w: &[u32; 5]) -> usize {
    let mut index = 0usize;
    let mut factorial = 24usize; // 4!
    for i in 0..4 {
        let mut smaller_after = 0usize;
        for j in i + 1..5 {
            // (w[j], j) < (w[i], i) lexicographically; j > i, so ties lose
            if w[j] < w[i] {
                smaller_after += 1;
            }
        }
        index += smaller_after * factorial;
        if i < 3 {
            factorial /= 4 - i;
        }
    }
    index
}

struct Kernel {
    /// Pseudo-inverse of the pattern-count covariance, row-major 120×120.
    inv: Vec<f64>,
    rank: usize,
}

fn kernel() -> &'static Kernel {
    static KERNEL: OnceLock<Kernel> = OnceLock::new();
    KERNEL.get_or_init(|| {
        let cov = build_covariance();
        let (values, vectors) = jacobi_eigen(&cov, PATTERNS);
        let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-9 * max;
        let mut inv = vec![0.0f64; PATTERNS * PATTERNS];
        let mut rank = 0;
        for c in 0..PATTERNS {
            if values[c].abs() <= tol {
                continue;
            }
            rank += 1;
            let w = 1.0 / values[c];
            for i in 0..PATTERNS {
                let vi = vectors[i * PATTERNS + c];
                if vi == 0.0 {
                    continue;
                }
                for j in 0..PATTERNS {
                    inv[i * PATTERNS + j] += w * vi * vectors[j * PATTERNS + c];
                }
            }
        }
        assert_eq!(rank, EXPECTED_RANK, "permutation covariance rank");
        Kernel { inv, rank }
    })
}

/// Per-window covariance of pattern indicators across all window gaps.
fn build_covariance() -> Vec<f64> {
    let uniform = 1.0 / PATTERNS as f64;
    let mut cov = vec![0.0f64; PATTERNS * PATTERNS];

    // gap 0: Cov(1_α, 1_β) = δ/120 - 1/14400
    for a in 0..PATTERNS {
        for b in 0..PATTERNS {
            let same = if a == b { uniform } else { 0.0 };
            cov[a * PATTERNS + b] = same - uniform * uniform;
        }
    }

    // gaps 1..4 in both directions
    for gap in 1..=4usize {
        let joint = joint_pattern_probs(gap);
        for a in 0..PATTERNS {
            for b in 0..PATTERNS {
                cov[a * PATTERNS + b] += joint[a * PATTERNS + b] - uniform * uniform;
                cov[a * PATTERNS + b] += joint[b * PATTERNS + a] - uniform * uniform;
            }
        }
    }
    cov
}

/// Joint probability that windows at distance `gap` show patterns (α, β),
/// by exhaustive enumeration of all (5+gap)! orderings.
fn joint_pattern_probs(gap: usize) -> Vec<f64> {
    let n = 5 + gap;
    let mut joint = vec![0.0f64; PATTERNS * PATTERNS];
    let mut values: Vec<u32> = (0..n as u32).collect();
    let weight = 1.0 / (1..=n).map(|x| x as f64).product::<f64>();
    permute(&mut values, 0, &mut |perm| {
        let head: [u32; 5] = perm[..5].try_into().expect("window");
        let tail: [u32; 5] = perm[gap..gap + 5].try_into().expect("window");
        joint[pattern_index(&head) * PATTERNS + pattern_index(&tail)] += weight;
    });
    joint
}

fn permute(values: &mut Vec<u32>, start: usize, visit: &mut impl FnMut(&[u32])) {
    if start == values.len() {
        visit(values);
        return;
    }
    for i in start..values.len() {
        values.swap(start, i);
        permute(values, start + 1, visit);
        values.swap(start, i);
    }
}

pub fn operm5(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Operm5)?;
    let mut cursor = buffer.cursor();
    let kernel = kernel();
    let mut result = TestResult::new(TestId::Operm5);

    for pass in 1..=PASSES {
        let words: Vec<u32> = (0..WORDS_PER_PASS)
            .map(|_| cursor.next_word32())
            .collect::<Result<_>>()?;
        let mut counts = [0u64; PATTERNS];
        for window in words.windows(5) {
            let w: [u32; 5] = window.try_into().expect("window of 5");
            counts[pattern_index(&w)] += 1;
        }
        let n = (WORDS_PER_PASS - 4) as f64;
        let expected = n / PATTERNS as f64;
        let d: Vec<f64> = counts.iter().map(|&c| c as f64 - expected).collect();
        let mut stat = 0.0;
        for i in 0..PATTERNS {
            if d[i] == 0.0 {
                continue;
            }
            let row = &kernel.inv[i * PATTERNS..(i + 1) * PATTERNS];
            let acc: f64 = row.iter().zip(&d).map(|(w, dj)| w * dj).sum();
            stat += d[i] * acc;
        }
        let stat = (stat / n).max(0.0);
        result.push(format!("pass {pass}"), chisq_pvalue(stat, kernel.rank as u32)?);
        result.detail(format!("pass {pass} statistic"), stat);
    }
    Ok(result)
}
