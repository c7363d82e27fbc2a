//! randlab — a randomness-engineering toolkit.
//!
//! Three deterministic generators (the D-sequence construction plus the KISS
//! and MT19937 baselines), raw stream-file production, the classic battery of
//! fifteen statistical tests, verdict classification, and comparison/plot
//! reporting.
//!
//! The usual flow:
//!
//! ```no_run
//! use randlab::battery::{run_battery, TestId};
//! use randlab::bitstream::ByteBuffer;
//! use randlab::generators::GeneratorSpec;
//! use randlab::report::BatteryReport;
//!
//! let spec = GeneratorSpec::Mt19937 { seed: 5489 };
//! let buffer = ByteBuffer::new(spec.stream_bytes(12_000_000).unwrap()).unwrap();
//! let results = run_battery(&buffer, &TestId::ALL, 1).unwrap();
//! let report = BatteryReport::build(spec.label(), &buffer, results);
//! println!("{}", report.summary_line());
//! # let _ = report;
//! ```
//!
//! Each major capability also ships as a runnable example; see the crate's
//! `examples/` directory.

pub mod battery;
pub mod bitstream;
pub mod cli;
pub mod error;
pub mod generators;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
