//! Run the full fifteen-test battery on an in-memory MT19937 stream and
//! print per-test verdicts.
//!
//! ```text
//! cargo run --release --example run_battery -- 5489
//! ```

use std::time::Instant;

use randlab::battery::{run_battery, TestId};
use randlab::bitstream::ByteBuffer;
use randlab::generators::GeneratorSpec;
use randlab::report::BatteryReport;

fn main() {
    let seed: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("numeric seed"))
        .unwrap_or(5489);

    let spec = GeneratorSpec::Mt19937 { seed };
    println!("generating 12 MB from {}...", spec.label());
    let buffer = ByteBuffer::new(spec.stream_bytes(12_000_000).expect("stream")).expect("buffer");

    let start = Instant::now();
    let results = run_battery(&buffer, &TestId::ALL, 1).expect("battery");
    let elapsed = start.elapsed().as_secs_f64();

    let report = BatteryReport::build(spec.label(), &buffer, results);
    for entry in &report.results {
        println!(
            "{:<12} {:>3} p-values  representative {:>9.6}  {}",
            entry.test,
            entry.pvalues.len(),
            entry.representative_pvalue(),
            entry.verdict
        );
    }
    println!("{}  in {elapsed:.2} s", report.summary_line());
}
