//! Acceptance suite: one test per release criterion. Each prints a
//! `ACCEPTANCE <n> (<name>): PASS` line; run with `--nocapture` to see them:
//!
//! ```text
//! cargo test --release -p randlab --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use randlab::battery::{run_battery, TestId};
use randlab::bitstream::{write_stream_file, ByteBuffer};
use randlab::generators::{DSequenceParams, DSequenceState, GeneratorSpec};

// -- helpers ---------------------------------------------------------------

fn temp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("randlab_accept_{name}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

fn near_edge(p: f64, tol: f64) -> bool {
    p <= tol || p >= 1.0 - tol
}

// -- criterion 1 -----------------------------------------------------------

/// A 12,000,000-byte D-sequence file at range 65,000 must fail OPSO, OQSO,
/// DNA and squeeze with every p-value within 1e-6 of 1, in under 60 s.
#[test]
fn acceptance_1_dseq_failure_reproduction() {
    let start = Instant::now();
    let dir = temp_dir("c1");
    let path = dir.join("dseq.bin");
    write_stream_file(&path, &GeneratorSpec::DSequence { range: 65_000 }, 12_000_000)
        .expect("write stream");
    let buffer = ByteBuffer::from_file(&path).expect("read back");
    assert_eq!(buffer.len(), 12_000_000);

    let selection = [TestId::Opso, TestId::Oqso, TestId::Dna, TestId::Squeeze];
    let results = run_battery(&buffer, &selection, 1).expect("battery");
    let mut checked = 0;
    for result in &results {
        for p in &result.pvalues {
            assert!(
                p.value >= 1.0 - 1e-6,
                "{} '{}' p = {} should be within 1e-6 of 1",
                result.test,
                p.label,
                p.value
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 23 + 28 + 31 + 1);

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.1} s, budget 60 s");
    std::fs::remove_dir_all(&dir).ok();
    println!("ACCEPTANCE 1 (dseq failure reproduction): PASS ({elapsed:.1} s, {checked} p-values at 1)");
}

// -- criterion 2 -----------------------------------------------------------

/// Over 20 MT19937 seeds, the pooled full-battery p-values pass KS against
/// uniform with p > 1e-4, and no seed yields more than one p-value within
/// 1e-6 of an edge. Budget 15 minutes.
#[test]
fn acceptance_2_null_calibration() {
    let start = Instant::now();
    let mut pooled = Vec::new();
    let mut worst_edges = 0usize;
    for seed in 101u32..=120 {
        let buffer = ByteBuffer::new(
            GeneratorSpec::Mt19937 { seed }
                .stream_bytes(12_000_000)
                .expect("stream"),
        )
        .expect("buffer");
        let results = run_battery(&buffer, &TestId::ALL, 1).expect("battery");
        let mut edges = 0usize;
        for result in &results {
            for p in &result.pvalues {
                if near_edge(p.value, 1e-6) {
                    edges += 1;
                    eprintln!("seed {seed}: edge p {} '{}' = {}", result.test, p.label, p.value);
                }
                pooled.push(p.value);
            }
        }
        assert!(
            edges <= 1,
            "seed {seed} produced {edges} p-values within 1e-6 of an edge"
        );
        worst_edges = worst_edges.max(edges);
    }
    let ks = randlab::stats::ks_pvalue(&pooled).expect("pooled KS");
    assert!(
        ks > 1e-4,
        "pooled KS over {} p-values = {ks}, needs > 1e-4",
        pooled.len()
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 900.0, "took {elapsed:.0} s, budget 900 s");
    println!(
        "ACCEPTANCE 2 (null calibration): PASS ({} p-values pooled, KS p = {ks:.4}, worst edge count {worst_edges}, {elapsed:.0} s)",
        pooled.len()
    );
}

// -- criterion 3 -----------------------------------------------------------

/// Generating the 12 MB D-sequence file completes in under 10 s.
#[test]
fn acceptance_3_generation_performance() {
    let dir = temp_dir("c3");
    let path = dir.join("dseq.bin");
    let start = Instant::now();
    write_stream_file(&path, &GeneratorSpec::DSequence { range: 65_000 }, 12_000_000)
        .expect("write stream");
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 12_000_000);
    assert!(elapsed < 10.0, "took {elapsed:.2} s, budget 10 s");
    std::fs::remove_dir_all(&dir).ok();
    println!("ACCEPTANCE 3 (12 MB generation performance): PASS ({elapsed:.2} s)");
}

// -- criterion 4 -----------------------------------------------------------

mod oracles {
    /// Naive GF(2) row reduction over byte matrices.
    #[allow(clippy::needless_range_loop)] // xor across two rows of one matrix
    pub fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let cols = m[0].len();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] == 1) else {
                continue;
            };
            m.swap(pivot, rank);
            for r in 0..m.len() {
                if r != rank && m[r][col] == 1 {
                    for c in 0..cols {
                        m[r][c] ^= m[rank][c];
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Square-and-multiply in u128.
    pub fn modpow(base: u64, mut exp: u64, m: u64) -> u64 {
        let m = u128::from(m);
        let mut result = 1u128;
        let mut b = u128::from(base) % m;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        result as u64
    }

    /// Adaptive Simpson quadrature.
    pub fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let c = (a + b) / 2.0;
        let s = |l: f64, r: f64| (r - l) / 6.0 * (f(l) + 4.0 * f((l + r) / 2.0) + f(r));
        let whole = s(a, b);
        let left = s(a, c);
        let right = s(c, b);
        let threshold = (15.0 * tol).max(1e-15 * whole.abs());
        if depth == 0 || (left + right - whole).abs() <= threshold {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(f, a, c, tol / 2.0, depth - 1) + simpson(f, c, b, tol / 2.0, depth - 1)
        }
    }

    pub fn ln_gamma(x: f64) -> f64 {
        // Lanczos g=7; independent copy kept small
        const COEF: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let z = x - 1.0;
        let mut acc = COEF[0];
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + 7.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Exact/numeric oracle equivalences for the statistical kernel.
#[test]
fn acceptance_4_oracle_equivalences() {
    use randlab::generators::Mt19937State;
    use randlab::stats::{chisq_pvalue, gf2_rank, normal_cdf, BinaryMatrix};

    // gf2_rank vs naive elimination, 1000 random 6x8 and 31x31 matrices
    let mut rng = Mt19937State::new(0xACC401);
    for trial in 0..1000 {
        let (r, c) = if trial % 2 == 0 { (6, 8) } else { (31, 31) };
        let rows: Vec<Vec<u8>> = (0..r)
            .map(|_| (0..c).map(|_| (rng.next_word() & 1) as u8).collect())
            .collect();
        let m = BinaryMatrix::from_fn(r, c, |i, j| rows[i][j] == 1);
        assert_eq!(gf2_rank(&m), oracles::naive_rank(&rows), "trial {trial}");
    }

    // D-sequence stepping vs square-and-multiply, 1000 random (m, l, i)
    for trial in 0..1000 {
        let m = u64::from(rng.next_word() % (u32::MAX - 6)) + 6;
        let l = u64::from(rng.next_word()) % (m - 2) + 2;
        let steps = u64::from(rng.next_word() % 3000 + 1);
        let params = DSequenceParams { range: 0, p: 0, q: 0, m, l };
        let mut state = DSequenceState::new(params);
        let mut last = 0;
        for _ in 0..steps {
            last = state.next_residue();
        }
        assert_eq!(last, oracles::modpow(l, steps, m), "trial {trial}");
    }

    // craps win probability from exhaustive enumeration, exact in i64 rationals
    let mut ways = [0i64; 13];
    for d1 in 1..=6usize {
        for d2 in 1..=6usize {
            ways[d1 + d2] += 1;
        }
    }
    // P = 8/36 + Σ (w/36)·(w/(w+6)) over points; common denominator 36·Π(w+6)
    let mut num = 0i64;
    let mut den = 36i64;
    for point in [4, 5, 6, 8, 9, 10] {
        den *= ways[point] + 6;
    }
    num += 8 * (den / 36);
    for point in [4, 5, 6, 8, 9, 10] {
        let w = ways[point];
        num += w * w * (den / 36 / (w + 6));
    }
    let g = gcd(num, den);
    assert_eq!((num / g, den / g), (244, 495), "craps win probability");

    // normal_cdf vs quadrature on a 1000-point grid, |err| <= 1e-10
    let pdf = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for i in 0..=1000 {
        let x = -8.0 + i as f64 * 16.0 / 1000.0;
        let want = 0.5 + oracles::simpson(pdf, 0.0, x, 1e-13, 40);
        let got = normal_cdf(x);
        assert!(
            (got - want).abs() <= 1e-10,
            "normal_cdf({x}) = {got}, oracle {want}"
        );
    }

    // chisq_pvalue vs quadrature across dofs, |err| <= 1e-8 on 1000 points
    let mut points = 0;
    for dof in [1u32, 2, 6, 42, 99] {
        for i in 1..=200 {
            let s = i as f64 * f64::from(dof) * 3.0 / 200.0;
            let want = if dof == 1 {
                let p1 = |u: f64| 2.0 * pdf(u);
                oracles::simpson(p1, 0.0, s.sqrt(), 1e-13, 40)
            } else {
                let k = f64::from(dof) / 2.0;
                let p = move |t: f64| {
                    if t <= 0.0 {
                        // chi-square density at the origin: 1/2 for dof 2, 0 beyond
                        return if dof == 2 { 0.5 } else { 0.0 };
                    }
                    ((k - 1.0) * t.ln() - t / 2.0 - oracles::ln_gamma(k) - k * 2.0f64.ln()).exp()
                };
                oracles::simpson(p, 0.0, s, 1e-12, 30)
            };
            let got = chisq_pvalue(s, dof).expect("valid dof");
            assert!(
                (got - want).abs() <= 1e-8,
                "chisq({s}, {dof}) = {got}, oracle {want}"
            );
            points += 1;
        }
    }
    assert_eq!(points, 1000);

    println!("ACCEPTANCE 4 (oracle equivalences): PASS");
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// -- criterion 5 -----------------------------------------------------------

/// The all-zero 12 MB buffer saturates every battery test to an edge with no
/// NaN and no crash.
#[test]
fn acceptance_5_degenerate_saturation() {
    let buffer = ByteBuffer::new(vec![0u8; 12_000_000]).expect("buffer");
    let results = run_battery(&buffer, &TestId::ALL, 1).expect("battery");
    assert_eq!(results.len(), 15);
    for result in &results {
        for p in &result.pvalues {
            assert!(!p.value.is_nan(), "{} '{}' is NaN", result.test, p.label);
            assert!(
                near_edge(p.value, 1e-6),
                "{} '{}' = {} not within 1e-6 of an edge",
                result.test,
                p.label,
                p.value
            );
        }
    }
    println!("ACCEPTANCE 5 (degenerate saturation): PASS");
}

// -- criterion 6 -----------------------------------------------------------

/// classify(0.5) = Pass, classify(0.99) = Suspect, classify(1 - 1e-7) = Fail.
#[test]
fn acceptance_6_classification_thresholds() {
    use randlab::report::{classify_single, VerdictLevel};
    assert_eq!(classify_single(0.5), VerdictLevel::Pass);
    assert_eq!(classify_single(0.99), VerdictLevel::Suspect);
    assert_eq!(classify_single(1.0 - 1e-7), VerdictLevel::Fail);
    println!("ACCEPTANCE 6 (classification thresholds): PASS");
}

// -- criterion 7 -----------------------------------------------------------

/// The committed 1 MiB fixture yields bit-identical JSON reports across
/// repeated runs and across --jobs settings.
#[test]
fn acceptance_7_determinism_regression() {
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/mt5489_1mib.bin");
    // guard the fixture itself: it is the seed-5489 MT stream
    let buffer = ByteBuffer::from_file(&fixture).expect("fixture present");
    assert_eq!(buffer.len(), 1 << 20);
    let regenerated = GeneratorSpec::Mt19937 { seed: 5489 }
        .stream_bytes(1 << 20)
        .expect("stream");
    assert_eq!(buffer.as_slice(), &regenerated[..], "fixture drifted");

    let dir = temp_dir("c7");
    let selection = "birthday,count1s,parking,spheres3d,sums,runs";
    let mut outputs = Vec::new();
    for (run_idx, jobs) in [(0, "1"), (1, "1"), (2, "4")] {
        let report = dir.join(format!("r{run_idx}.json"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_randlab"))
            .args([
                "test",
                "--in",
                fixture.to_str().unwrap(),
                "--tests",
                selection,
                "--jobs",
                jobs,
                "--report",
                report.to_str().unwrap(),
                "--label",
                "fixture",
            ])
            .output()
            .expect("spawn randlab");
        assert_eq!(status.status.code(), Some(0), "{status:?}");
        outputs.push(std::fs::read(&report).expect("report bytes"));
    }
    assert_eq!(outputs[0], outputs[1], "repeated runs must match");
    assert_eq!(outputs[0], outputs[2], "jobs=4 must match jobs=1");

    // and the library path agrees with itself across jobs settings
    let ids = [
        TestId::Birthday,
        TestId::Count1s,
        TestId::Parking,
        TestId::Spheres3d,
        TestId::Sums,
        TestId::Runs,
    ];
    let a = run_battery(&buffer, &ids, 1).expect("battery");
    let b = run_battery(&buffer, &ids, 3).expect("battery");
    assert_eq!(a, b);

    std::fs::remove_dir_all(&dir).ok();
    println!("ACCEPTANCE 7 (determinism regression): PASS");
}
