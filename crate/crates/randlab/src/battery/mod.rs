//! The fifteen classical battery tests.
//!
//! Every test is a pure function of an immutable [`ByteBuffer`]: it opens its
//! own cursor at byte 0, consumes big-endian 32-bit words (or raw bits) and
//! returns a [`TestResult`] whose p-values follow the left-tail convention —
//! both "too good" and "too bad" streams push p toward 0 or 1.
//!
//! Canonical order and naming:
//! birthday, operm5, rank, bitstream, opso, oqso, dna, count1s, parking,
//! mindist, spheres3d, squeeze, sums, runs, craps.

mod birthday;
mod count1s;
mod craps;
mod mindist;
mod monkey;
mod operm5;
mod parking;
mod rank;
mod runs;
mod spheres;
mod squeeze;
mod sums;

pub use birthday::birthday_spacings;
pub use count1s::{count_the_1s, Count1sMode};
pub use craps::craps;
pub use mindist::minimum_distance;
pub use monkey::{monkey_test, MonkeyConfig};
pub use operm5::operm5;
pub use parking::parking_lot;
pub use rank::{binary_rank_6x8, binary_rank_large};
pub use runs::runs;
pub use spheres::spheres_3d;
pub use squeeze::squeeze;
pub use sums::overlapping_sums;

// calibration entry points used by the `calibrate` example
pub use mindist::calibrate_mean_d2;
pub use monkey::calibrate_missing_words;
pub use parking::calibrate_parking;
pub use spheres::calibrate_mean_r3;
pub use squeeze::{calibrate_squeeze_cells, SQUEEZE_CELLS, SQUEEZE_CELL_PROBS};

use std::collections::BTreeMap;
use std::thread;

use crate::bitstream::ByteBuffer;
use crate::error::{Error, Result};
use crate::stats::PValue;

/// Identifier of one battery test, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TestId {
    Birthday,
    Operm5,
    Rank,
    Bitstream,
    Opso,
    Oqso,
    Dna,
    Count1s,
    Parking,
    MinDist,
    Spheres3d,
    Squeeze,
    Sums,
    Runs,
    Craps,
}

impl TestId {
    pub const ALL: [TestId; 15] = [
        TestId::Birthday,
        TestId::Operm5,
        TestId::Rank,
        TestId::Bitstream,
        TestId::Opso,
        TestId::Oqso,
        TestId::Dna,
        TestId::Count1s,
        TestId::Parking,
        TestId::MinDist,
        TestId::Spheres3d,
        TestId::Squeeze,
        TestId::Sums,
        TestId::Runs,
        TestId::Craps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestId::Birthday => "birthday",
            TestId::Operm5 => "operm5",
            TestId::Rank => "rank",
            TestId::Bitstream => "bitstream",
            TestId::Opso => "opso",
            TestId::Oqso => "oqso",
            TestId::Dna => "dna",
            TestId::Count1s => "count1s",
            TestId::Parking => "parking",
            TestId::MinDist => "mindist",
            TestId::Spheres3d => "spheres3d",
            TestId::Squeeze => "squeeze",
            TestId::Sums => "sums",
            TestId::Runs => "runs",
            TestId::Craps => "craps",
        }
    }

    pub fn parse(s: &str) -> Result<TestId> {
        TestId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let valid: Vec<&str> = TestId::ALL.iter().map(|t| t.name()).collect();
                Error::Parameter(format!(
                    "unknown test name '{s}'; valid names: {}",
                    valid.join(", ")
                ))
            })
    }

    /// Bytes the test is statically known to need. Squeeze and craps consume
    /// a data-dependent amount beyond this floor and report exhaustion as an
    /// end-of-stream error.
    pub fn min_bytes(self) -> u64 {
        match self {
            TestId::Birthday => 256_000 * 4,
            TestId::Operm5 => 2 * 1_000_000 * 4,
            TestId::Rank => 40_000 * 32 * 4,
            TestId::Bitstream => (20 * (1u64 << 21) + 19).div_ceil(8),
            TestId::Opso => ((1u64 << 21) + 1) * 4,
            TestId::Oqso => ((1u64 << 21) + 3) * 4,
            TestId::Dna => ((1u64 << 21) + 9) * 4,
            TestId::Count1s => 256_004 * 4,
            TestId::Parking => 10 * 12_000 * 2 * 4,
            TestId::MinDist => 100 * 8_000 * 2 * 4,
            TestId::Spheres3d => 20 * 4_000 * 3 * 4,
            TestId::Squeeze => 100_000 * 4,
            TestId::Sums => 10 * 199 * 4,
            TestId::Runs => 2 * 10_000 * 4,
            TestId::Craps => 200_000 * 2 * 4,
        }
    }
}

impl std::fmt::Display for TestId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One battery test's named p-values plus summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub test: TestId,
    pub pvalues: Vec<PValue>,
    pub details: BTreeMap<String, f64>,
}

impl TestResult {
    fn new(test: TestId) -> Self {
        TestResult {
            test,
            pvalues: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, p: f64) {
        self.pvalues.push(PValue::new(label, p));
    }

    fn detail(&mut self, key: impl Into<String>, value: f64) {
        self.details.insert(key.into(), value);
    }
}

/// Map a 32-bit word to a unit uniform in [0, 1).
#[inline]
pub(crate) fn to_unit(word: u32) -> f64 {
    f64::from(word) / 4_294_967_296.0
}

pub(crate) fn size_gate(buffer: &ByteBuffer, test: TestId) -> Result<()> {
    let required = test.min_bytes();
    if (buffer.len() as u64) < required {
        return Err(Error::Size {
            required,
            available: buffer.len() as u64,
            context: format!("test '{}'", test.name()),
        });
    }
    Ok(())
}

/// Run one canonical test, merging the rank and count-the-1's sub-tests into
/// their single battery entries.
pub fn run_test(buffer: &ByteBuffer, test: TestId) -> Result<TestResult> {
    match test {
        TestId::Birthday => birthday_spacings(buffer),
        TestId::Operm5 => operm5(buffer),
        TestId::Rank => {
            let r31 = binary_rank_large(buffer, 31)?;
            let r32 = binary_rank_large(buffer, 32)?;
            let r6x8 = binary_rank_6x8(buffer)?;
            let mut merged = TestResult::new(TestId::Rank);
            for part in [r31, r32, r6x8] {
                merged.pvalues.extend(part.pvalues);
                merged.details.extend(part.details);
            }
            Ok(merged)
        }
        TestId::Bitstream => monkey_test(buffer, &MonkeyConfig::bitstream()),
        TestId::Opso => monkey_test(buffer, &MonkeyConfig::opso()),
        TestId::Oqso => monkey_test(buffer, &MonkeyConfig::oqso()),
        TestId::Dna => monkey_test(buffer, &MonkeyConfig::dna()),
        TestId::Count1s => {
            let stream = count_the_1s(buffer, Count1sMode::Stream)?;
            let bytes = count_the_1s(buffer, Count1sMode::SpecificBytes)?;
            let mut merged = TestResult::new(TestId::Count1s);
            for part in [stream, bytes] {
                merged.pvalues.extend(part.pvalues);
                merged.details.extend(part.details);
            }
            Ok(merged)
        }
        TestId::Parking => parking_lot(buffer),
        TestId::MinDist => minimum_distance(buffer),
        TestId::Spheres3d => spheres_3d(buffer),
        TestId::Squeeze => squeeze(buffer),
        TestId::Sums => overlapping_sums(buffer),
        TestId::Runs => runs(buffer),
        TestId::Craps => craps(buffer),
    }
}

/// Run the selected tests in canonical order.
///
/// `jobs` bounds worker threads; results and errors are merged in canonical
/// order, so the outcome is independent of the parallelism degree.
pub fn run_battery(
    buffer: &ByteBuffer,
    selection: &[TestId],
    jobs: usize,
) -> Result<Vec<TestResult>> {
    let mut ordered: Vec<TestId> = TestId::ALL
        .iter()
        .copied()
        .filter(|t| selection.contains(t))
        .collect();
    ordered.dedup();
    if ordered.is_empty() {
        return Err(Error::Parameter("no tests selected".to_string()));
    }
    for &t in &ordered {
        size_gate(buffer, t)?;
    }

    let jobs = jobs.clamp(1, ordered.len());
    if jobs == 1 {
        return ordered.iter().map(|&t| run_test(buffer, t)).collect();
    }

    let mut outcomes: Vec<Option<Result<TestResult>>> = Vec::new();
    outcomes.resize_with(ordered.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let outcomes_mx = std::sync::Mutex::new(&mut outcomes);
    thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= ordered.len() {
                    break;
                }
                let out = run_test(buffer, ordered[i]);
                outcomes_mx.lock().expect("battery worker poisoned")[i] = Some(out);
            });
        }
    });

    outcomes
        .into_iter()
        .map(|slot| slot.expect("every test slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorSpec;

    fn mt_buffer(seed: u32, nbytes: usize) -> ByteBuffer {
        ByteBuffer::new(
            GeneratorSpec::Mt19937 { seed }
                .stream_bytes(nbytes)
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parse_names() {
        assert_eq!(TestId::parse("squeeze").unwrap(), TestId::Squeeze);
        let err = TestId::parse("nosuch").unwrap_err().to_string();
        assert!(err.contains("birthday") && err.contains("craps"), "{err}");
    }

    #[test]
    fn battery_runs_all_fifteen_and_is_deterministic() {
        let buffer = mt_buffer(5489, 12_000_000);
        let a = run_battery(&buffer, &TestId::ALL, 1).unwrap();
        assert_eq!(a.len(), 15);
        for (r, t) in a.iter().zip(TestId::ALL) {
            assert_eq!(r.test, t);
            assert!(!r.pvalues.is_empty());
            for p in &r.pvalues {
                assert!((0.0..=1.0).contains(&p.value), "{}: {}", t, p.value);
            }
        }
        let b = run_battery(&buffer, &TestId::ALL, 4).unwrap();
        assert_eq!(a, b, "parallel run must match sequential run exactly");
    }

    #[test]
    fn battery_rejects_small_buffer_naming_requirement() {
        let buffer = ByteBuffer::new(vec![0u8; 100]).unwrap();
        let err = run_battery(&buffer, &[TestId::Operm5], 1).unwrap_err();
        match err {
            Error::Size { required, .. } => assert_eq!(required, 8_000_000),
            other => panic!("expected size error, got {other}"),
        }
    }

    #[test]
    fn selection_subset_keeps_canonical_order() {
        let buffer = mt_buffer(1, 1_100_000);
        let results =
            run_battery(&buffer, &[TestId::Runs, TestId::Sums, TestId::Birthday], 2).unwrap();
        let names: Vec<&str> = results.iter().map(|r| r.test.name()).collect();
        assert_eq!(names, vec!["birthday", "sums", "runs"]);
    }
}
