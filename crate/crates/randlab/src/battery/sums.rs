//! Overlapping-sums test: 100 moving sums of 100 consecutive uniforms per
//! round, decorrelated into independent standard normals through the Cholesky
//! factor of the moving-sum covariance, mapped to uniforms and KS-tested.
//! Ten rounds, then one KS over the round p-values.

use std::sync::OnceLock;

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::{ks_pvalue, normal_cdf};

const WINDOW: usize = 100;
const SUMS: usize = 100;
const ROUNDS: usize = 10;

/// cov(S_i, S_j) = (WINDOW - |i-j|) / 12 for |i-j| < WINDOW.
pub(crate) fn moving_sum_covariance(i: usize, j: usize) -> f64 {
    let lag = i.abs_diff(j);
    if lag >= WINDOW {
        0.0
    } else {
        (WINDOW - lag) as f64 / 12.0
    }
}

/// Lower Cholesky factor of the covariance, computed once.
fn cholesky() -> &'static Vec<f64> {
    static FACTOR: OnceLock<Vec<f64>> = OnceLock::new();
    FACTOR.get_or_init(|| {
        let n = SUMS;
        let mut l = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = moving_sum_covariance(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        l
    })
}

pub fn overlapping_sums(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Sums)?;
    let mut cursor = buffer.cursor();
    let mut result = TestResult::new(TestId::Sums);
    let l = cholesky();

    let mut round_ps = Vec::with_capacity(ROUNDS);
    for round in 1..=ROUNDS {
        let uniforms: Vec<f64> = (0..WINDOW + SUMS - 1)
            .map(|_| cursor.next_word32().map(super::to_unit))
            .collect::<Result<_>>()?;
        // moving sums, centered
        let mut sums = Vec::with_capacity(SUMS);
        let mut acc: f64 = uniforms[..WINDOW].iter().sum();
        sums.push(acc - WINDOW as f64 / 2.0);
        for j in 1..SUMS {
            acc += uniforms[j + WINDOW - 1] - uniforms[j - 1];
            sums.push(acc - WINDOW as f64 / 2.0);
        }
        // forward substitution L z = s yields iid standard normals under the null
        let mut z = vec![0.0f64; SUMS];
        for i in 0..SUMS {
            let mut s = sums[i];
            for k in 0..i {
                s -= l[i * SUMS + k] * z[k];
            }
            z[i] = s / l[i * SUMS + i];
        }
        let unit: Vec<f64> = z.iter().map(|&v| normal_cdf(v)).collect();
        let p = ks_pvalue(&unit)?;
        result.detail(format!("round {round} p"), p);
        round_ps.push(p);
    }

    result.push("ks", ks_pvalue(&round_ps)?);
    Ok(result)
}
