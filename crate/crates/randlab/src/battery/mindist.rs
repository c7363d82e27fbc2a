//! Minimum-distance test: 100 rounds of 8,000 points in a 10,000-sided
//! square; the squared minimum pairwise distance is approximately exponential
//! with mean 0.995, so u = 1 - exp(-d²/0.995) should be uniform. One KS
//! p-value over the 100 transformed minima.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::generators::Mt19937State;
use crate::stats::ks_pvalue;

const SIDE: f64 = 10_000.0;
const POINTS: usize = 8_000;
const ROUNDS: usize = 100;

/// Mean of d² under the null; confirmed by `examples/calibrate.rs mindist`.
const MEAN_D2: f64 = 0.995;

/// Minimum squared pairwise distance via an x-sorted sweep.
pub(crate) fn min_squared_distance(points: &mut [(f64, f64)]) -> f64 {
    points.sort_by(|a, b| a.partial_cmp(b).expect("coordinates are finite"));
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        let (xi, yi) = points[i];
        for &(xj, yj) in &points[i + 1..] {
            let dx = xj - xi;
            if dx * dx >= best {
                break; // sorted by x: no later point can beat the current best
            }
            let dy = yj - yi;
            let d2 = dx * dx + dy * dy;
            if d2 < best {
                best = d2;
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
    }
    best
}

fn round_min_d2(mut next_word: impl FnMut() -> Result<u32>) -> Result<f64> {
    let mut points = Vec::with_capacity(POINTS);
    for _ in 0..POINTS {
        let x = super::to_unit(next_word()?) * SIDE;
        let y = super::to_unit(next_word()?) * SIDE;
        points.push((x, y));
    }
    Ok(min_squared_distance(&mut points))
}

pub fn minimum_distance(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::MinDist)?;
    let mut cursor = buffer.cursor();
    let mut transformed = Vec::with_capacity(ROUNDS);
    let mut mean_obs = 0.0;
    for _ in 0..ROUNDS {
        let d2 = round_min_d2(|| cursor.next_word32())?;
        mean_obs += d2;
        transformed.push(1.0 - (-d2 / MEAN_D2).exp());
    }
    let mut result = TestResult::new(TestId::MinDist);
    result.push("ks", ks_pvalue(&transformed)?);
    result.detail("mean d^2", mean_obs / ROUNDS as f64);
    Ok(result)
}

/// Monte Carlo oracle: mean of d² over `rounds` MT19937-driven rounds.
pub fn calibrate_mean_d2(rounds: u64, seed: u32) -> f64 {
    let mut mt = Mt19937State::new(seed);
    let mut sum = 0.0;
    for _ in 0..rounds {
        sum += round_min_d2(|| Ok(mt.next_word())).expect("infinite source");
    }
    sum / rounds as f64
}
