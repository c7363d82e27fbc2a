//! The headline comparison: run the battery over KISS, the D-sequence and
//! MT19937 streams and print the side-by-side table. The D-sequence column
//! shows the characteristic sparse-occupancy and squeeze failures.
//!
//! ```text
//! cargo run --release --example compare_generators
//! cargo run --release --example compare_generators -- 65000 squeeze,opso
//! ```

use randlab::battery::{run_battery, TestId};
use randlab::bitstream::ByteBuffer;
use randlab::generators::GeneratorSpec;
use randlab::report::{compare_reports, BatteryReport};

fn main() {
    let range: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("numeric range"))
        .unwrap_or(65_000);
    let selection: Vec<TestId> = match std::env::args().nth(2) {
        Some(names) => names
            .split(',')
            .map(|n| TestId::parse(n.trim()).expect("test name"))
            .collect(),
        None => vec![
            TestId::Operm5,
            TestId::Rank,
            TestId::Opso,
            TestId::Oqso,
            TestId::Dna,
            TestId::Squeeze,
        ],
    };

    let specs = [
        GeneratorSpec::Kiss { seed: None },
        GeneratorSpec::DSequence { range },
        GeneratorSpec::Mt19937 { seed: 5489 },
    ];
    let mut reports = Vec::new();
    for spec in specs {
        eprintln!("running {} ...", spec.label());
        let buffer =
            ByteBuffer::new(spec.stream_bytes(12_000_000).expect("stream")).expect("buffer");
        let results = run_battery(&buffer, &selection, 1).expect("battery");
        reports.push(BatteryReport::build(spec.label(), &buffer, results));
    }

    let table = compare_reports(&reports).expect("aligned selections");
    print!("{}", table.to_text());
    for report in &reports {
        println!("{:<24} {}", report.generator, report.summary_line());
    }
}
