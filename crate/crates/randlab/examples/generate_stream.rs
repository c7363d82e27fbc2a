//! Produce raw stream files for all three generators and time each one.
//!
//! ```text
//! cargo run --release --example generate_stream -- /tmp/streams 12000000
//! ```

use std::path::PathBuf;
use std::time::Instant;

use randlab::bitstream::write_stream_file;
use randlab::generators::GeneratorSpec;

fn main() {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "/tmp/randlab_streams".to_string()),
    );
    let nbytes: u64 = std::env::args()
        .nth(2)
        .map(|s| s.parse().expect("numeric byte count"))
        .unwrap_or(12_000_000);
    std::fs::create_dir_all(&dir).expect("create output directory");

    for (name, spec) in [
        ("dseq.bin", GeneratorSpec::DSequence { range: 65_000 }),
        ("kiss.bin", GeneratorSpec::Kiss { seed: None }),
        ("mt.bin", GeneratorSpec::Mt19937 { seed: 5489 }),
    ] {
        let path = dir.join(name);
        let start = Instant::now();
        write_stream_file(&path, &spec, nbytes).expect("write stream");
        println!(
            "{:<24} {} bytes in {:.3} s",
            spec.label(),
            nbytes,
            start.elapsed().as_secs_f64()
        );
    }
    println!("files in {}", dir.display());
}
