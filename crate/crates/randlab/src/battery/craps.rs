//! Craps test: play 200,000 games, check the win count against its normal law
//! and the throws-per-game distribution against the exact game-length law.

use super::{size_gate, TestId, TestResult};
use crate::bitstream::ByteBuffer;
use crate::error::Result;
use crate::stats::{chisq_pvalue, normal_cdf};

const GAMES: u64 = 200_000;
/// Throw-count cells: 1..20 individually, ≥21 lumped.
const CELLS: usize = 21;

/// Exact win probability of craps.
pub(crate) const WIN_PROB: f64 = 244.0 / 495.0;

pub fn craps(buffer: &ByteBuffer) -> Result<TestResult> {
    size_gate(buffer, TestId::Craps)?;
    let mut cursor = buffer.cursor();
    let mut throw = || -> Result<u32> {
        // two dice, each 1 + floor(6·U), computed in exact integer arithmetic
        let d1 = 1 + ((u64::from(cursor.next_word32()?) * 6) >> 32) as u32;
        let d2 = 1 + ((u64::from(cursor.next_word32()?) * 6) >> 32) as u32;
        Ok(d1 + d2)
    };

    let mut wins = 0u64;
    let mut throws_hist = [0u64; CELLS];
    for _ in 0..GAMES {
        let mut nthrows = 1u64;
        let first = throw()?;
        let won = match first {
            7 | 11 => true,
            2 | 3 | 12 => false,
            point => loop {
                nthrows += 1;
                let t = throw()?;
                if t == point {
                    break true;
                }
                if t == 7 {
                    break false;
                }
            },
        };
        if won {
            wins += 1;
        }
        throws_hist[(nthrows.min(CELLS as u64) - 1) as usize] += 1;
    }

    let n = GAMES as f64;
    let mean = n * WIN_PROB;
    let sd = (n * WIN_PROB * (1.0 - WIN_PROB)).sqrt();
    let p_wins = normal_cdf((wins as f64 - mean) / sd);

    let probs = game_length_probs();
    let mut stat = 0.0;
    for (i, &observed) in throws_hist.iter().enumerate() {
        let expected = n * probs[i];
        stat += (observed as f64 - expected).powi(2) / expected;
    }
    let p_throws = chisq_pvalue(stat, (CELLS - 1) as u32)?;

    let mut result = TestResult::new(TestId::Craps);
    result.push("wins", p_wins);
    result.push("throws", p_throws);
    result.detail("wins", wins as f64);
    result.detail("throws statistic", stat);
    Ok(result)
}

/// Exact distribution of throws per game: P(L = 1..20) and P(L ≥ 21).
///
/// First throw ends the game with probability 12/36; otherwise a point
/// p ∈ {4,5,6,8,9,10} is thrown (h_p ∈ {3,4,5,5,4,3} ways) and every later
/// throw ends it with probability (h_p + 6)/36.
pub(crate) fn game_length_probs() -> [f64; CELLS] {
    let point_ways: [f64; 6] = [3.0, 4.0, 5.0, 5.0, 4.0, 3.0];
    let mut probs = [0.0f64; CELLS];
    probs[0] = 12.0 / 36.0;
    let mut tail = 0.0;
    for k in 2..=20usize {
        let mut p = 0.0;
        for &h in &point_ways {
            let end = (h + 6.0) / 36.0;
            p += h / 36.0 * (1.0 - end).powi(k as i32 - 2) * end;
        }
        probs[k - 1] = p;
        tail += p;
    }
    probs[CELLS - 1] = 1.0 - probs[0] - tail;
    probs
}
