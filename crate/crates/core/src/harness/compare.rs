use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ExperimentReport;

/// One table row. Fields are kept as text so that rows read from external
/// result files pass through unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub benchmark: String,
    pub algorithm: String,
    pub trial_count: String,
    pub success_rate: String,
    pub mean_iterations: String,
    pub mean_evaluations: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl From<&ExperimentReport> for ComparisonRow {
    fn from(report: &ExperimentReport) -> Self {
        let s = &report.summary;
        ComparisonRow {
            benchmark: s.benchmark.clone(),
            algorithm: s.algorithm.clone(),
            trial_count: s.trial_count.to_string(),
            success_rate: s.success_rate.to_string(),
            mean_iterations: opt(s.mean_iterations),
            mean_evaluations: opt(s.mean_evaluations),
        }
    }
}

/// Tabulates experiment reports, followed by the rows of any external CSV
/// files (same columns as [`ComparisonTable::to_csv`]). Every row must name
/// the same benchmark, and the reports must share a base seed so that they
/// start from the same points.
pub fn compare(reports: &[ExperimentReport], external: &[&Path]) -> Result<ComparisonTable> {
    if let Some(first) = reports.first() {
        if reports.iter().any(|r| r.base_seed != first.base_seed) {
            return Err(Error::invalid("base_seed", "compared experiments must share a base seed"));
        }
    }
    let mut rows: Vec<ComparisonRow> = reports.iter().map(ComparisonRow::from).collect();
    for path in external {
        let mut reader = csv::Reader::from_path(path)?;
        for row in reader.deserialize() {
            rows.push(row?);
        }
    }
    if let Some(first) = rows.first() {
        if let Some(other) = rows.iter().find(|r| r.benchmark != first.benchmark) {
            return Err(Error::invalid(
                "benchmark",
                format!("cannot compare {} with {}", first.benchmark, other.benchmark),
            ));
        }
    }
    Ok(ComparisonTable { rows })
}

impl ComparisonTable {
    const HEADER: [&'static str; 6] = [
        "benchmark",
        "algorithm",
        "trial_count",
        "success_rate",
        "mean_iterations",
        "mean_evaluations",
    ];

    fn cells(row: &ComparisonRow) -> [&str; 6] {
        [
            &row.benchmark,
            &row.algorithm,
            &row.trial_count,
            &row.success_rate,
            &row.mean_iterations,
            &row.mean_evaluations,
        ]
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(Self::HEADER)?;
        for row in &self.rows {
            writer.write_record(Self::cells(row))?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

/// Column-aligned plain text.
impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut widths = Self::HEADER.map(str::len);
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(Self::cells(row)) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |f: &mut fmt::Formatter<'_>, cells: [&str; 6]| {
            let text: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            writeln!(f, "{}", text.join("  ").trim_end())
        };
        line(f, Self::HEADER)?;
        for row in &self.rows {
            line(f, Self::cells(row))?;
        }
        Ok(())
    }
}
