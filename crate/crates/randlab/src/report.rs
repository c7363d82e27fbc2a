//! Verdict classification, battery reports, comparison tables and p-value
//! distribution artifacts.
//!
//! Classification follows the edge-based reading of battery output: isolated
//! p-values outside [0.025, 0.975] are only suspicious; repeated p-values
//! within 1e-6 of 0 or 1 (or a lone test's single p at an edge) are failures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::battery::TestResult;
use crate::bitstream::ByteBuffer;
use crate::error::{Error, Result};
use crate::stats::{ks_pvalue, PValue};

/// Edge proximity that turns extreme p-values into failures.
pub const FAIL_EDGE_TOLERANCE: f64 = 1e-6;
/// Isolated p-values outside [SUSPECT_LOW, SUSPECT_HIGH] mark a test Suspect.
pub const SUSPECT_LOW: f64 = 0.025;
pub const SUSPECT_HIGH: f64 = 0.975;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictLevel {
    Pass,
    Suspect,
    Fail,
}

impl std::fmt::Display for VerdictLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictLevel::Pass => "pass",
            VerdictLevel::Suspect => "suspect",
            VerdictLevel::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub level: VerdictLevel,
    pub reason: String,
}

/// Classify one test's p-values.
pub fn classify(result: &TestResult) -> Verdict {
    classify_pvalues(&result.pvalues)
}

/// Classification of a lone p-value (single-p tests).
pub fn classify_single(p: f64) -> VerdictLevel {
    classify_pvalues(&[PValue::new("p", p)]).level
}

pub(crate) fn classify_pvalues(pvalues: &[PValue]) -> Verdict {
    let n = pvalues.len();
    let at_edge = |p: f64| p <= FAIL_EDGE_TOLERANCE || p >= 1.0 - FAIL_EDGE_TOLERANCE;
    let edges = pvalues.iter().filter(|p| at_edge(p.value)).count();

    let failed = if n == 1 {
        edges >= 1
    } else {
        edges >= 2 || 2 * edges >= n
    };
    if failed {
        return Verdict {
            level: VerdictLevel::Fail,
            reason: format!("{edges} of {n} p-values within 1e-6 of an edge"),
        };
    }

    if let Some(p) = pvalues
        .iter()
        .find(|p| p.value < SUSPECT_LOW || p.value > SUSPECT_HIGH)
    {
        return Verdict {
            level: VerdictLevel::Suspect,
            reason: format!(
                "p-value '{}' = {:.6} outside [{SUSPECT_LOW}, {SUSPECT_HIGH}]",
                p.label, p.value
            ),
        };
    }

    Verdict {
        level: VerdictLevel::Pass,
        reason: format!("all {n} p-values inside [{SUSPECT_LOW}, {SUSPECT_HIGH}]"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileInfo {
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestEntry {
    pub test: String,
    pub pvalues: Vec<PValue>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    pub verdict: VerdictLevel,
    pub reason: String,
}

impl TestEntry {
    /// The table cell standing for this test: the p-value itself for
    /// single-p tests, the KS-over-p uniformity p-value otherwise.
    pub fn representative_pvalue(&self) -> f64 {
        if self.pvalues.len() == 1 {
            self.pvalues[0].value
        } else {
            let values: Vec<f64> = self.pvalues.iter().map(|p| p.value).collect();
            ks_pvalue(&values).expect("report p-values are valid KS samples")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u32,
    pub suspect: u32,
    pub fail: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub generator: String,
    pub file: FileInfo,
    pub results: Vec<TestEntry>,
    pub summary: Summary,
}

impl BatteryReport {
    pub fn build(
        generator: impl Into<String>,
        buffer: &ByteBuffer,
        results: Vec<TestResult>,
    ) -> Self {
        let mut summary = Summary {
            pass: 0,
            suspect: 0,
            fail: 0,
        };
        let entries = results
            .into_iter()
            .map(|r| {
                let verdict = classify(&r);
                match verdict.level {
                    VerdictLevel::Pass => summary.pass += 1,
                    VerdictLevel::Suspect => summary.suspect += 1,
                    VerdictLevel::Fail => summary.fail += 1,
                }
                TestEntry {
                    test: r.test.name().to_string(),
                    pvalues: r.pvalues,
                    details: r.details,
                    verdict: verdict.level,
                    reason: verdict.reason,
                }
            })
            .collect();
        BatteryReport {
            generator: generator.into(),
            file: FileInfo {
                bytes: buffer.len() as u64,
                sha256: buffer.sha256_hex(),
            },
            results: entries,
            summary,
        }
    }

    pub fn has_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn summary_line(&self) -> String {
        format!(
            "pass {}  suspect {}  fail {}",
            self.summary.pass, self.summary.suspect, self.summary.fail
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("report JSON: {e}")))
    }

    /// One row per (test, p-label) pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("test,label,pvalue,verdict\n");
        for entry in &self.results {
            for p in &entry.pvalues {
                out.push_str(&format!(
                    "{},{},{:.6},{}\n",
                    entry.test, p.label, p.value, entry.verdict
                ));
            }
        }
        out
    }
}

/// Per-test rows, per-generator columns of representative p-values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub tests: Vec<String>,
    pub generators: Vec<String>,
    /// cells[row][column] = (representative p, verdict)
    pub cells: Vec<Vec<(f64, VerdictLevel)>>,
}

pub fn compare_reports(reports: &[BatteryReport]) -> Result<ComparisonTable> {
    if reports.len() < 2 {
        return Err(Error::Parameter(format!(
            "comparison needs at least 2 reports, got {}",
            reports.len()
        )));
    }
    let tests: Vec<String> = reports[0].results.iter().map(|r| r.test.clone()).collect();
    for report in &reports[1..] {
        let other: Vec<String> = report.results.iter().map(|r| r.test.clone()).collect();
        if other != tests {
            return Err(Error::Parameter(format!(
                "test selections differ: [{}] vs [{}]",
                tests.join(" "),
                other.join(" ")
            )));
        }
    }
    let generators = reports.iter().map(|r| r.generator.clone()).collect();
    let cells = (0..tests.len())
        .map(|row| {
            reports
                .iter()
                .map(|r| {
                    let entry = &r.results[row];
                    (entry.representative_pvalue(), entry.verdict)
                })
                .collect()
        })
        .collect();
    Ok(ComparisonTable {
        tests,
        generators,
        cells,
    })
}

impl ComparisonTable {
    pub fn to_text(&self) -> String {
        let mut out = format!("{:<12}", "test");
        for g in &self.generators {
            out.push_str(&format!(" {g:>24}"));
        }
        out.push('\n');
        for (row, test) in self.tests.iter().enumerate() {
            out.push_str(&format!("{test:<12}"));
            for (p, verdict) in &self.cells[row] {
                let mark = match verdict {
                    VerdictLevel::Pass => "",
                    VerdictLevel::Suspect => " ?",
                    VerdictLevel::Fail => " *FAIL*",
                };
                out.push_str(&format!(" {:>24}", format!("{p:.6}{mark}")));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("test");
        for g in &self.generators {
            out.push_str(&format!(",{g},{g} verdict"));
        }
        out.push('\n');
        for (row, test) in self.tests.iter().enumerate() {
            out.push_str(test);
            for (p, verdict) in &self.cells[row] {
                out.push_str(&format!(",{p:.6},{verdict}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histogram over [0, 1]; the last bin includes its right edge.
pub fn pvalue_histogram(pvalues: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if pvalues.is_empty() {
        return Err(Error::Parameter("histogram needs at least one p-value".to_string()));
    }
    if bins < 2 {
        return Err(Error::Parameter("histogram needs at least 2 bins".to_string()));
    }
    for &p in pvalues {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("p-value {p} outside [0, 1]")));
        }
    }
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|b| HistogramBin {
            lo: b as f64 / bins as f64,
            hi: (b + 1) as f64 / bins as f64,
            count: 0,
        })
        .collect();
    for &p in pvalues {
        let bin = ((p * bins as f64) as usize).min(bins - 1);
        out[bin].count += 1;
    }
    Ok(out)
}

/// Sorted step function of cumulative fractions; duplicates collapse to the
/// highest fraction, and the final fraction is exactly 1.
pub fn pvalue_ecdf(pvalues: &[f64]) -> Result<Vec<(f64, f64)>> {
    if pvalues.is_empty() {
        return Err(Error::Parameter("ECDF needs at least one value".to_string()));
    }
    let mut sorted = pvalues.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("p-values are finite"));
    let n = sorted.len();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let fraction = (i + 1) as f64 / n as f64;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = fraction,
            _ => out.push((v, fraction)),
        }
    }
    Ok(out)
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for b in bins {
        out.push_str(&format!("{:.6},{:.6},{}\n", b.lo, b.hi, b.count));
    }
    out
}

pub fn ecdf_csv(steps: &[(f64, f64)]) -> String {
    let mut out = String::from("value,cumulative_fraction\n");
    for (v, f) in steps {
        out.push_str(&format!("{v:.6},{f:.6}\n"));
    }
    out
}

const SVG_W: f64 = 480.0;
const SVG_H: f64 = 320.0;
const MARGIN: f64 = 40.0;

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\">{title}</text>\n",
        SVG_W / 2.0
    )
}

fn svg_axes() -> String {
    let x0 = MARGIN;
    let y0 = SVG_H - MARGIN;
    let x1 = SVG_W - MARGIN;
    let y1 = MARGIN;
    let mut s = format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    );
    for i in 0..=4 {
        let frac = f64::from(i) / 4.0;
        let x = x0 + frac * (x1 - x0);
        s.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"10\">{frac:.2}</text>\n",
            y0 + 15.0
        ));
    }
    s
}

/// Self-contained SVG rendering of a p-value histogram.
pub fn histogram_svg(bins: &[HistogramBin], title: &str) -> String {
    let max = bins.iter().map(|b| b.count).max().unwrap_or(1).max(1) as f64;
    let plot_w = SVG_W - 2.0 * MARGIN;
    let plot_h = SVG_H - 2.0 * MARGIN;
    let mut svg = svg_header(title);
    svg.push_str(&svg_axes());
    for b in bins {
        let x = MARGIN + b.lo * plot_w;
        let w = (b.hi - b.lo) * plot_w;
        let h = b.count as f64 / max * plot_h;
        let y = SVG_H - MARGIN - h;
        svg.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" \
             fill=\"steelblue\" stroke=\"black\" stroke-width=\"0.5\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Self-contained SVG rendering of a p-value ECDF with the uniform reference
/// diagonal.
pub fn ecdf_svg(steps: &[(f64, f64)], title: &str) -> String {
    let plot_w = SVG_W - 2.0 * MARGIN;
    let plot_h = SVG_H - 2.0 * MARGIN;
    let px = |v: f64| MARGIN + v * plot_w;
    let py = |f: f64| SVG_H - MARGIN - f * plot_h;
    let mut svg = svg_header(title);
    svg.push_str(&svg_axes());
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" \
         stroke-dasharray=\"4 3\"/>\n",
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    ));
    let mut points = vec![(px(0.0), py(0.0))];
    let mut prev_f = 0.0;
    for &(v, f) in steps {
        points.push((px(v), py(prev_f)));
        points.push((px(v), py(f)));
        prev_f = f;
    }
    points.push((px(1.0), py(prev_f)));
    let path: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n",
        path.join(" ")
    ));
    svg.push_str("</svg>\n");
    svg
}
