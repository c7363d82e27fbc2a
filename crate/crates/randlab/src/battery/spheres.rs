//! 3-D spheres test: 4,000 points in a 1,000-sided cube; the cubed minimum
//! pairwise distance is approximately exponential with mean 30, so
//! u = 1 - exp(-r³/30) should be uniform. Twenty rounds, one KS p-value.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::generators::Mt19937State;
use crate::stats::ks_pvalue;

const SIDE: f64 = 1_000.0;
const POINTS: usize = 4_000;
const ROUNDS: usize = 20;

/// Mean of r³ under the null; confirmed by `examples/calibrate.rs spheres`.
const MEAN_R3: f64 = 30.0;

fn min_squared_distance_3d(points: &mut [(f64, f64, f64)]) -> f64 {
    points.sort_by(|a, b| a.partial_cmp(b).expect("coordinates are finite"));
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        let (xi, yi, zi) = points[i];
        for &(xj, yj, zj) in &points[i + 1..] {
            let dx = xj - xi;
            if dx * dx >= best {
                break;
            }
            let dy = yj - yi;
            let dz = zj - zi;
            let d2 = dx * dx + dy * dy + dz * dz;
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

fn round_min_r3(mut next_word: impl FnMut() -> Result<u32>) -> Result<f64> {
    let mut points = Vec::with_capacity(POINTS);
    for _ in 0..POINTS {
        let x = super::to_unit(next_word()?) * SIDE;
        let y = super::to_unit(next_word()?) * SIDE;
        let z = super::to_unit(next_word()?) * SIDE;
        points.push((x, y, z));
    }
    Ok(min_squared_distance_3d(&mut points).powf(1.5))
}

pub fn spheres_3d(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Spheres3d)?;
    let mut cursor = buffer.cursor();
    let mut transformed = Vec::with_capacity(ROUNDS);
    let mut mean_obs = 0.0;
    for _ in 0..ROUNDS {
        let r3 = round_min_r3(|| cursor.next_word32())?;
        mean_obs += r3;
        transformed.push(1.0 - (-r3 / MEAN_R3).exp());
    }
    let mut result = TestResult::new(TestId::Spheres3d);
    result.push("ks", ks_pvalue(&transformed)?);
    result.detail("mean r^3", mean_obs / ROUNDS as f64);
    Ok(result)
}

/// Monte Carlo oracle: mean of r³ over `rounds` MT19937-driven rounds.
pub fn calibrate_mean_r3(rounds: u64, seed: u32) -> f64 {
    let mut mt = Mt19937State::new(seed);
    let mut sum = 0.0;
    for _ in 0..rounds {
        sum += round_min_r3(|| Ok(mt.next_word())).expect("infinite source");
    }
    sum / rounds as f64
}
