//! Parking-lot test: attempt to park 12,000 unit-square cars in a 100×100
//! lot; an attempt crashes when it overlaps a parked car in both coordinates.
//! The success count is z-scored against its calibrated law, ten rounds plus
//! a KS over the round p-values.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::generators::Mt19937State;
use crate::stats::{ks_pvalue, normal_cdf};

const SIDE: f64 = 100.0;
const ATTEMPTS: usize = 12_000;
const ROUNDS: usize = 10;

/// Mean and standard deviation of the success count, confirmed by
/// `examples/calibrate.rs parking` (Monte Carlo, 10,000 rounds).
const MEAN: f64 = 3523.0;
const SIGMA: f64 = 21.9;

/// One round: park cars, return the success count.
fn park_round(mut next_word: impl FnMut() -> Result<u32>) -> Result<u32> {
    // unit-square crash test on a 100×100 grid of cells: a car at (x, y)
    // can only crash with cars whose cell is within one step
    let cells = SIDE as usize;
    let mut grid: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cells * cells];
    let mut parked = 0u32;
    for _ in 0..ATTEMPTS {
        let x = super::to_unit(next_word()?) * SIDE;
        let y = super::to_unit(next_word()?) * SIDE;
        let cx = (x as usize).min(cells - 1);
        let cy = (y as usize).min(cells - 1);
        let mut crash = false;
        'scan: for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
            for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for &(px, py) in &grid[gx * cells + gy] {
                    if (x - px).abs() < 1.0 && (y - py).abs() < 1.0 {
                        crash = true;
                        break 'scan;
                    }
                }
            }
        }
        if !crash {
            grid[cx * cells + cy].push((x, y));
            parked += 1;
        }
    }
    Ok(parked)
}

pub fn parking_lot(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Parking)?;
    let mut cursor = buffer.cursor();
    let mut result = TestResult::new(TestId::Parking);
    let mut round_ps = Vec::with_capacity(ROUNDS);
    for round in 1..=ROUNDS {
        let parked = park_round(|| cursor.next_word32())?;
        let p = normal_cdf((f64::from(parked) - MEAN) / SIGMA);
        result.push(format!("round {round}"), p);
        result.detail(format!("round {round} parked"), f64::from(parked));
        round_ps.push(p);
    }
    result.push("ks", ks_pvalue(&round_ps)?);
    Ok(result)
}

/// Monte Carlo oracle for the success-count law: returns (mean, sigma) over
/// `rounds` independent MT19937-driven rounds.
pub fn calibrate_parking(rounds: u64, seed: u32) -> (f64, f64) {
    let mut mt = Mt19937State::new(seed);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..rounds {
        let parked = f64::from(park_round(|| Ok(mt.next_word())).expect("infinite source"));
        sum += parked;
        sumsq += parked * parked;
    }
    let n = rounds as f64;
    let mean = sum / n;
    let var = (sumsq - n * mean * mean) / (n - 1.0);
    (mean, var.sqrt())
}
