//! Emit histogram and ECDF plot data (CSV + SVG) for the 25 p-values of the
//! 6x8 binary-rank test, the classic picture of p-value uniformity.
//!
//! ```text
//! cargo run --release --example pvalue_plots -- /tmp/randlab_plots
//! ```

use std::path::PathBuf;

use randlab::battery::binary_rank_6x8;
use randlab::bitstream::ByteBuffer;
use randlab::generators::GeneratorSpec;
use randlab::report::{ecdf_csv, ecdf_svg, histogram_csv, histogram_svg, pvalue_ecdf, pvalue_histogram};

fn main() {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "/tmp/randlab_plots".to_string()),
    );
    std::fs::create_dir_all(&dir).expect("create output directory");

    let spec = GeneratorSpec::Mt19937 { seed: 5489 };
    eprintln!("running the 6x8 binary-rank test on {}...", spec.label());
    let buffer = ByteBuffer::new(spec.stream_bytes(5_200_000).expect("stream")).expect("buffer");
    let result = binary_rank_6x8(&buffer).expect("rank test");

    // the 25 per-window p-values, without the overall KS
    let values: Vec<f64> = result
        .pvalues
        .iter()
        .filter(|p| p.label.starts_with("6x8 bits"))
        .map(|p| p.value)
        .collect();
    assert_eq!(values.len(), 25);

    let bins = pvalue_histogram(&values, 10).expect("histogram");
    let steps = pvalue_ecdf(&values).expect("ecdf");
    let title = format!("{} rank 6x8", spec.label());

    for (name, text) in [
        ("rank6x8_hist.csv", histogram_csv(&bins)),
        ("rank6x8_ecdf.csv", ecdf_csv(&steps)),
        ("rank6x8_hist.svg", histogram_svg(&bins, &title)),
        ("rank6x8_ecdf.svg", ecdf_svg(&steps, &title)),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, text).expect("write plot file");
        println!("wrote {}", path.display());
    }
}
