//! Command-line interface: generate stream files, run the battery, compare
//! reports, plot p-value distributions.
//!
//! Exit codes: 0 success (no battery failure), 1 battery failure, 2 usage or
//! parameter error, 3 I/O error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::battery::{run_battery, TestId};
use crate::bitstream::{write_stream_file, ByteBuffer};
use crate::error::Error;
use crate::generators::GeneratorSpec;
use crate::report::{
    compare_reports, ecdf_csv, ecdf_svg, histogram_csv, histogram_svg, pvalue_ecdf,
    pvalue_histogram, BatteryReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BATTERY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser)]
#[command(
    name = "randlab",
    version,
    about = "Pseudo-random stream generation and the classic 15-test battery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a raw pseudo-random stream file
    Generate(GenerateArgs),
    /// Run the battery on a stream file and write a report
    Test(TestArgs),
    /// Compare battery reports side by side
    Compare(CompareArgs),
    /// Emit histogram and ECDF plot data for a test's p-values
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorKind {
    Dseq,
    Kiss,
    Mt,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator to run
    #[arg(long = "gen", value_enum)]
    gen: GeneratorKind,
    /// Maximum range for the D-sequence parameter search (dseq only)
    #[arg(long)]
    range: Option<u64>,
    /// 32-bit seed (mt defaults to 5489; kiss defaults to its canonical state)
    #[arg(long)]
    seed: Option<u32>,
    /// File size in bytes
    #[arg(long, default_value_t = 12_000_000)]
    bytes: u64,
    /// Output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct TestArgs {
    /// Input stream file
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated test names (default: all fifteen)
    #[arg(long, value_delimiter = ',')]
    tests: Vec<String>,
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    /// Report output path (default: <input>.report.json/.csv)
    #[arg(long)]
    report: Option<PathBuf>,
    /// Generator label recorded in the report (default: input file name)
    #[arg(long)]
    label: Option<String>,
    /// Worker threads (default: RANDLAB_JOBS or the number of cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompareFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct CompareArgs {
    /// Two or more JSON report files
    #[arg(long = "reports", num_args = 1..)]
    reports: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = CompareFormat::Text)]
    format: CompareFormat,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// JSON report file
    #[arg(long)]
    report: PathBuf,
    /// Test name, or one of the label groups rank31x31, rank32x32, rank6x8,
    /// count1s_stream, count1s_bytes
    #[arg(long = "test")]
    test: String,
    /// Histogram bin count
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Output prefix; writes <prefix>_hist.csv and <prefix>_ecdf.csv
    #[arg(long = "out-prefix")]
    out_prefix: String,
    /// Also write self-contained SVG renderings
    #[arg(long)]
    svg: bool,
}

/// Parse arguments and dispatch; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Test(args) => cmd_test(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("randlab: {err}");
    exit_code_for(err)
}

fn cmd_generate(args: GenerateArgs) -> i32 {
    if args.bytes < 4 {
        eprintln!("randlab: parameter error: --bytes must be at least 4");
        return EXIT_USAGE;
    }
    let spec = match args.gen {
        GeneratorKind::Dseq => {
            let Some(range) = args.range else {
                eprintln!("randlab: parameter error: --gen dseq requires --range");
                return EXIT_USAGE;
            };
            GeneratorSpec::DSequence { range }
        }
        GeneratorKind::Kiss => GeneratorSpec::Kiss { seed: args.seed },
        GeneratorKind::Mt => GeneratorSpec::Mt19937 {
            seed: args.seed.unwrap_or(5489),
        },
    };
    let start = Instant::now();
    if let Err(e) = write_stream_file(&args.out, &spec, args.bytes) {
        return fail(&e);
    }
    println!(
        "wrote {} bytes of {} to {} in {:.3} s",
        args.bytes,
        spec.label(),
        args.out.display(),
        start.elapsed().as_secs_f64()
    );
    EXIT_OK
}

fn parse_selection(names: &[String]) -> Result<Vec<TestId>, Error> {
    if names.is_empty() {
        return Ok(TestId::ALL.to_vec());
    }
    names.iter().map(|n| TestId::parse(n.trim())).collect()
}

fn job_count(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("RANDLAB_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .filter(|&j| j >= 1)
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_test(args: TestArgs) -> i32 {
    let selection = match parse_selection(&args.tests) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let buffer = match ByteBuffer::from_file(&args.input) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let jobs = job_count(args.jobs);
    let start = Instant::now();
    let results = match run_battery(&buffer, &selection, jobs) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let elapsed = start.elapsed().as_secs_f64();

    let label = args.label.unwrap_or_else(|| {
        args.input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "stream".to_string())
    });
    let report = BatteryReport::build(label, &buffer, results);

    for entry in &report.results {
        println!(
            "{:<12} {:>9.6}  {}",
            entry.test,
            entry.representative_pvalue(),
            entry.verdict
        );
    }
    println!("{}  ({elapsed:.2} s, {jobs} jobs)", report.summary_line());

    let (text, extension) = match args.format {
        ReportFormat::Json => (report.to_json(), "json"),
        ReportFormat::Csv => (report.to_csv(), "csv"),
    };
    let path = args.report.unwrap_or_else(|| {
        let mut name = args.input.as_os_str().to_owned();
        name.push(format!(".report.{extension}"));
        PathBuf::from(name)
    });
    if let Err(e) = write_text(&path, &text) {
        return fail(&e);
    }
    println!("report written to {}", path.display());

    if report.has_fail() {
        EXIT_BATTERY_FAIL
    } else {
        EXIT_OK
    }
}

fn cmd_compare(args: CompareArgs) -> i32 {
    if args.reports.len() < 2 {
        eprintln!(
            "randlab: parameter error: --reports needs at least 2 files, got {}",
            args.reports.len()
        );
        return EXIT_USAGE;
    }
    let mut reports = Vec::with_capacity(args.reports.len());
    for path in &args.reports {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(&Error::io(path, e)),
        };
        match BatteryReport::from_json(&text) {
            Ok(r) => reports.push(r),
            Err(e) => return fail(&e),
        }
    }
    let table = match compare_reports(&reports) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let rendered = match args.format {
        CompareFormat::Text => table.to_text(),
        CompareFormat::Csv => table.to_csv(),
    };
    match args.out {
        Some(path) => {
            if let Err(e) = write_text(&path, &rendered) {
                return fail(&e);
            }
            println!("comparison written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    EXIT_OK
}

/// Resolve a plot selector to a set of p-values from the report.
fn plot_selection(report: &BatteryReport, selector: &str) -> Result<Vec<f64>, Error> {
    let entry_values = |test: &str, filter: &dyn Fn(&str) -> bool| -> Option<Vec<f64>> {
        report.results.iter().find(|e| e.test == test).map(|e| {
            e.pvalues
                .iter()
                .filter(|p| filter(&p.label))
                .map(|p| p.value)
                .collect()
        })
    };
    let values = match selector {
        "rank31x31" => entry_values("rank", &|l| l == "31x31"),
        "rank32x32" => entry_values("rank", &|l| l == "32x32"),
        "rank6x8" => entry_values("rank", &|l| l.starts_with("6x8 bits")),
        "count1s_stream" => entry_values("count1s", &|l| l == "stream"),
        "count1s_bytes" => entry_values("count1s", &|l| l.starts_with("byte ")),
        name => entry_values(name, &|_| true),
    };
    let values = values.ok_or_else(|| {
        let mut names: Vec<String> = report.results.iter().map(|e| e.test.clone()).collect();
        names.extend(
            ["rank31x31", "rank32x32", "rank6x8", "count1s_stream", "count1s_bytes"]
                .iter()
                .map(|s| s.to_string()),
        );
        Error::Parameter(format!(
            "test '{selector}' not in report; available: {}",
            names.join(", ")
        ))
    })?;
    if values.is_empty() {
        return Err(Error::Parameter(format!(
            "test '{selector}' has no p-values to plot"
        )));
    }
    Ok(values)
}

fn cmd_plot(args: PlotArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.report) {
        Ok(t) => t,
        Err(e) => return fail(&Error::io(&args.report, e)),
    };
    let report = match BatteryReport::from_json(&text) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let values = match plot_selection(&report, &args.test) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let bins = match pvalue_histogram(&values, args.bins) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let steps = match pvalue_ecdf(&values) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };

    let hist_path = PathBuf::from(format!("{}_hist.csv", args.out_prefix));
    let ecdf_path = PathBuf::from(format!("{}_ecdf.csv", args.out_prefix));
    if let Err(e) = write_text(&hist_path, &histogram_csv(&bins)) {
        return fail(&e);
    }
    if let Err(e) = write_text(&ecdf_path, &ecdf_csv(&steps)) {
        return fail(&e);
    }
    println!("wrote {} and {}", hist_path.display(), ecdf_path.display());

    if args.svg {
        let title = format!("{} — {}", report.generator, args.test);
        let hist_svg_path = PathBuf::from(format!("{}_hist.svg", args.out_prefix));
        let ecdf_svg_path = PathBuf::from(format!("{}_ecdf.svg", args.out_prefix));
        if let Err(e) = write_text(&hist_svg_path, &histogram_svg(&bins, &title)) {
            return fail(&e);
        }
        if let Err(e) = write_text(&ecdf_svg_path, &ecdf_svg(&steps, &title)) {
            return fail(&e);
        }
        println!(
            "wrote {} and {}",
            hist_svg_path.display(),
            ecdf_svg_path.display()
        );
    }
    EXIT_OK
}
