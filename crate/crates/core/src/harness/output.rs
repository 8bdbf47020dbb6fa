//! CSV, JSON and SVG writers. Floats are written in shortest round-trip form
//! so files can be compared byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::RunTrace;

use super::stats::five_number_summary;

pub fn write_trace_csv(trace: &[RunTrace], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in trace {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<RunTrace>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Best value of `trace` after `iteration` steps; finished runs hold their
/// final value.
fn best_at(trace: &[RunTrace], index: usize) -> &RunTrace {
    &trace[index.min(trace.len() - 1)]
}

/// Writes per-iteration best-value curves for every trace, plus their
/// pointwise min / quartiles / median / max.
///
/// Columns: `iteration`, then `trial_k_evaluations` and `trial_k_best` for
/// each trace, then `min,q1,median,q3,max` of the best values. Quartiles use
/// linear interpolation between order statistics at position `(n − 1)·q`.
/// Shorter traces are held at their last row.
pub fn emit_convergence_plot_data(traces: &[Vec<RunTrace>], path: &Path) -> Result<()> {
    if traces.is_empty() || traces.iter().any(|t| t.is_empty()) {
        return Err(Error::invalid("traces", "need at least one nonempty trace"));
    }
    let rows = traces.iter().map(Vec::len).max().unwrap_or(0);

    let mut header = vec!["iteration".to_string()];
    for k in 0..traces.len() {
        header.push(format!("trial_{k}_evaluations"));
        header.push(format!("trial_{k}_best"));
    }
    header.extend(["min", "q1", "median", "q3", "max"].map(String::from));

    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(&header)?;
    for i in 0..rows {
        let mut record = Vec::with_capacity(header.len());
        let mut bests = Vec::with_capacity(traces.len());
        record.push(i.to_string());
        for trace in traces {
            let row = best_at(trace, i);
            record.push(row.cumulative_evaluations.to_string());
            record.push(row.best_value.to_string());
            bests.push(row.best_value);
        }
        record.extend(five_number_summary(&bests).iter().map(f64::to_string));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Static line chart of the median best value (with the min–max band) on a
/// log scale, shifted by `offset` so the known minimum maps to zero.
pub fn render_convergence_svg(traces: &[Vec<RunTrace>], offset: f64, title: &str, path: &Path) -> Result<()> {
    if traces.is_empty() || traces.iter().any(|t| t.is_empty()) {
        return Err(Error::invalid("traces", "need at least one nonempty trace"));
    }
    let rows = traces.iter().map(Vec::len).max().unwrap_or(1);
    let floor = 1e-16;
    let series: Vec<[f64; 5]> = (0..rows)
        .map(|i| {
            let vals: Vec<f64> = traces
                .iter()
                .map(|t| (best_at(t, i).best_value - offset).max(floor).log10())
                .collect();
            five_number_summary(&vals)
        })
        .collect();
    let lo = series.iter().map(|s| s[0]).fold(f64::INFINITY, f64::min).floor();
    let hi = series.iter().map(|s| s[4]).fold(f64::NEG_INFINITY, f64::max).ceil().max(lo + 1.0);

    let (w, h, pad) = (640.0, 400.0, 50.0);
    let sx = |i: usize| pad + (w - 2.0 * pad) * i as f64 / (rows.max(2) - 1) as f64;
    let sy = |v: f64| h - pad - (h - 2.0 * pad) * (v - lo) / (hi - lo);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#, w / 2.0);
    let mut band = String::new();
    for (i, s) in series.iter().enumerate() {
        let _ = write!(band, "{:.2},{:.2} ", sx(i), sy(s[4]));
    }
    for (i, s) in series.iter().enumerate().rev() {
        let _ = write!(band, "{:.2},{:.2} ", sx(i), sy(s[0]));
    }
    let _ = writeln!(svg, r##"<polygon points="{band}" fill="#9ecae1" fill-opacity="0.5"/>"##);
    let median: String = series
        .iter()
        .enumerate()
        .map(|(i, s)| format!("{:.2},{:.2}", sx(i), sy(s[2])))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(svg, r##"<polyline points="{median}" fill="none" stroke="#08519c" stroke-width="2"/>"##);
    let _ = writeln!(
        svg,
        r#"<line x1="{pad}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/><line x1="{pad}" y1="{pad}" x2="{pad}" y2="{y}" stroke="black"/>"#,
        y = h - pad,
        x2 = w - pad
    );
    let mut tick = lo;
    while tick <= hi {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">1e{}</text>"#,
            pad - 4.0,
            sy(tick) + 4.0,
            tick as i64
        );
        tick += ((hi - lo) / 6.0).ceil().max(1.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">iteration (0..{})</text>"#,
        w / 2.0,
        h - 15.0,
        rows - 1
    );
    svg.push_str("</svg>\n");
    let mut file = fs::File::create(path)?;
    file.write_all(svg.as_bytes())?;
    Ok(())
}
