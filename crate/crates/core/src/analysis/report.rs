//! CSV schemas for every report, with exact numerators next to decimal
//! renderings.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use super::average::AverageReport;
use super::checks::CheckReport;
use super::complexity::{EntropyRow, SequentialRatioRow};
use super::discrepancy::{AverageGap, DiscrepancyReport, DistanceReport};
use super::recurrence::RecurrenceReport;
use crate::error::Result;
use crate::numtheory::ResidueLemmaReport;

/// Decimal rendering with 15 significant digits.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (14 - magnitude).clamp(0, 60) as usize;
    format!("{x:.decimals$}")
}

/// A report that serializes as one or more CSV rows.
pub trait CsvRows {
    fn header() -> &'static [&'static str];
    fn rows(&self) -> Vec<Vec<String>>;
}

fn pass(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

impl CsvRows for AverageReport {
    fn header() -> &'static [&'static str] {
        &["N", "S1_num", "S1", "S2_num", "S2", "baseline"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let s1_num = self
            .s1
            .real_numerator()
            .map(|n| n.to_string())
            .unwrap_or_default();
        vec![vec![
            self.n.to_string(),
            s1_num,
            fmt15(self.s1.value.re),
            self.s2.numerator.to_string(),
            fmt15(self.s2.value()),
            fmt15(self.baseline.value()),
        ]]
    }
}

impl CsvRows for DiscrepancyReport {
    fn header() -> &'static [&'static str] {
        &[
            "M",
            "K_M",
            "count",
            "ratio",
            "bound",
            "bound_exact",
            "proof_bound",
            "result",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.stage.to_string(),
            self.k_m.to_string(),
            self.count.to_string(),
            fmt15(self.ratio()),
            fmt15(self.bound_f64()),
            self.bound.to_string(),
            fmt15(self.proof_bound_f64()),
            pass(self.passed()),
        ]]
    }
}

impl CsvRows for AverageGap {
    fn header() -> &'static [&'static str] {
        &["M", "K_M", "S1_num", "baseline_num", "count", "result"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.stage.to_string(),
            self.k_m.to_string(),
            self.s1_numerator.to_string(),
            self.baseline_numerator.to_string(),
            self.count.to_string(),
            pass(self.passed()),
        ]]
    }
}

impl CsvRows for DistanceReport {
    fn header() -> &'static [&'static str] {
        &["M", "N", "total", "distance", "epsilon", "result"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.stage.to_string(),
            self.n.to_string(),
            self.total.to_string(),
            fmt15(self.value()),
            self.epsilon.to_string(),
            pass(self.passed()),
        ]]
    }
}

impl CsvRows for EntropyRow {
    fn header() -> &'static [&'static str] {
        &[
            "m",
            "lo",
            "hi",
            "sampled_p",
            "aligned_p",
            "bound",
            "log_p_over_m",
            "result",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let r = &self.report;
        vec![vec![
            r.m.to_string(),
            r.lo.to_string(),
            r.hi.to_string(),
            r.sampled_p.to_string(),
            r.aligned_p.to_string(),
            r.bound.to_string(),
            fmt15(self.log_rate),
            pass(self.passed()),
        ]]
    }
}

impl CsvRows for SequentialRatioRow {
    fn header() -> &'static [&'static str] {
        &["M", "l_M", "beta", "sampled_p", "aligned", "ratio"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.stage.to_string(),
            self.length.to_string(),
            self.beta.to_string(),
            self.sampled_p.to_string(),
            self.aligned.to_string(),
            fmt15(self.ratio),
        ]]
    }
}

impl CsvRows for RecurrenceReport {
    fn header() -> &'static [&'static str] {
        &[
            "i_max",
            "t_min",
            "t_max",
            "checked",
            "fail_i",
            "fail_t",
            "fail_period",
            "result",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let f = self.first_failure.as_ref();
        vec![vec![
            self.i_max.to_string(),
            self.t_lo.to_string(),
            self.t_hi.to_string(),
            self.checked.to_string(),
            f.map(|f| f.i.to_string()).unwrap_or_default(),
            f.map(|f| f.t.to_string()).unwrap_or_default(),
            f.map(|f| f.period.to_string()).unwrap_or_default(),
            pass(self.passed()),
        ]]
    }
}

impl CsvRows for ResidueLemmaReport {
    fn header() -> &'static [&'static str] {
        &["n", "covered", "nonzero_squares", "result"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.coverage
            .iter()
            .map(|&(n, covered, nonzero)| {
                vec![
                    n.to_string(),
                    covered.to_string(),
                    nonzero.to_string(),
                    pass(covered == nonzero && self.passed()),
                ]
            })
            .collect()
    }
}

impl CsvRows for CheckReport {
    fn header() -> &'static [&'static str] {
        &["check", "lo", "hi", "checked", "fail_n", "detail", "result"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let f = self.first_failure.as_ref();
        vec![vec![
            self.name.clone(),
            self.lo.to_string(),
            self.hi.to_string(),
            self.checked.to_string(),
            f.map(|f| f.n.to_string()).unwrap_or_default(),
            f.map(|f| f.detail.clone()).unwrap_or_default(),
            pass(self.passed()),
        ]]
    }
}

/// Writes `reports` to `out`, preceded by the header when `header` is set.
pub fn write_rows<T: CsvRows, W: Write>(out: W, reports: &[T], header: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if header {
        w.write_record(T::header())?;
    }
    for r in reports {
        for row in r.rows() {
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Renders `reports` as a CSV document with header.
pub fn to_csv_string<T: CsvRows>(reports: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, reports, true)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

/// Appends to `path`, writing the header only when the file is new or empty.
pub fn append_csv<T: CsvRows>(path: &Path, reports: &[T]) -> Result<()> {
    let fresh = std::fs::metadata(path)
        .map(|m| m.len() == 0)
        .unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_rows(file, reports, fresh)
}

/// Replaces `path` with a fresh CSV document.
pub fn write_csv<T: CsvRows>(path: &Path, reports: &[T]) -> Result<()> {
    write_rows(std::fs::File::create(path)?, reports, true)
}
