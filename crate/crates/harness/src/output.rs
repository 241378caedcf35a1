//! `results.csv` and one log-scale SVG line plot per metric.

use crate::error::{HarnessError, Result};
use crate::experiment::{Outcome, ResultRow};
use plotters::prelude::*;
use ratiep_core::Report;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: [&str; 10] = ["experiment", "strategy", "m", "err_o", "err_r", "err_f", "err_f_trunc", "err_p", "kappa", "seconds"];

/// Written in every metric column of a row whose solve broke down.
pub const BREAKDOWN_MARKER: &str = "breakdown";

/// Metric columns that get a plot, with their accessors.
pub const METRICS: [(&str, fn(&Report) -> Option<f64>); 6] = [
    ("err_o", |r| Some(r.err_o)),
    ("err_r", |r| Some(r.err_r)),
    ("err_f", |r| Some(r.err_f)),
    ("err_f_trunc", |r| r.err_f_truncated),
    ("err_p", |r| Some(r.err_p)),
    ("kappa", |r| r.kappa),
];

/// Shortest decimal that parses back to the same `f64`.
fn real(x: f64) -> String {
    format!("{x:e}")
}

/// Renders the rows as CSV text.
pub fn csv_string(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| HarnessError::Config(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        let mut rec = vec![row.experiment.name().to_string(), row.strategy.clone(), row.m.to_string()];
        match &row.outcome {
            Outcome::Metrics(r) => rec.extend(METRICS.iter().map(|(_, get)| get(r).map(real).unwrap_or_default())),
            Outcome::Breakdown(_) => rec.extend(METRICS.iter().map(|_| BREAKDOWN_MARKER.to_string())),
        }
        rec.push(row.seconds.map(real).unwrap_or_default());
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One line per strategy of `log10(metric)` against `m`. Breakdowns and
/// missing values split the line.
fn series(rows: &[ResultRow], get: fn(&Report) -> Option<f64>) -> Vec<(String, Vec<Vec<(f64, f64)>>)> {
    let mut names: Vec<String> = Vec::new();
    for r in rows {
        if !names.contains(&r.strategy) {
            names.push(r.strategy.clone());
        }
    }
    names
        .into_iter()
        .map(|name| {
            let mut segments = vec![Vec::new()];
            for r in rows.iter().filter(|r| r.strategy == name) {
                match r.report().and_then(get).filter(|v| *v > 0.0 && v.is_finite()) {
                    Some(v) => segments.last_mut().unwrap().push((r.m as f64, v.log10())),
                    None => segments.push(Vec::new()),
                }
            }
            segments.retain(|s| !s.is_empty());
            (name, segments)
        })
        .collect()
}

/// Draws one metric to an SVG string.
pub fn plot_svg(rows: &[ResultRow], metric: &str, get: fn(&Report) -> Option<f64>) -> Result<String> {
    let data = series(rows, get);
    let points = data.iter().flat_map(|(_, s)| s.iter().flatten());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        (x0, x1, y0, y1) = (x0.min(x), x1.max(x), y0.min(y), y1.max(y));
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (y0, y1) = (y0.floor() - 0.5, y1.ceil() + 0.5);
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (640, 420)).into_drawing_area();
        let plot_err = |e: &dyn std::fmt::Display| HarnessError::Plot(e.to_string());
        root.fill(&WHITE).map_err(|e| plot_err(&e))?;
        let experiment = rows.first().map(|r| r.experiment.name()).unwrap_or("");
        let mut chart = ChartBuilder::on(&root)
            .caption(format!("{experiment}: log10 {metric}"), ("sans-serif", 18))
            .margin(12)
            .x_label_area_size(36)
            .y_label_area_size(48)
            .build_cartesian_2d(x0..x1, y0..y1)
            .map_err(|e| plot_err(&e))?;
        chart
            .configure_mesh()
            .x_desc("m")
            .y_desc(format!("log10 {metric}"))
            .draw()
            .map_err(|e| plot_err(&e))?;
        for (k, (name, segments)) in data.into_iter().enumerate() {
            let color = Palette99::pick(k).to_rgba();
            for (s, seg) in segments.into_iter().enumerate() {
                let drawn = chart
                    .draw_series(LineSeries::new(seg, color.stroke_width(2)).point_size(2))
                    .map_err(|e| plot_err(&e))?;
                if s == 0 {
                    drawn.label(name.clone()).legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], color));
                }
            }
        }
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| plot_err(&e))?;
        root.present().map_err(|e| plot_err(&e))?;
    }
    Ok(svg)
}

/// Writes `results.csv` and `<metric>.svg` for every metric into `dir`,
/// returning the paths in that order.
pub fn write_outputs(rows: &[ResultRow], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut files = Vec::new();
    let csv_path = dir.join("results.csv");
    crate::files::write_text(&csv_path, &csv_string(rows)?)?;
    files.push(csv_path);
    for (name, get) in METRICS {
        let path = dir.join(format!("{name}.svg"));
        crate::files::write_text(&path, &plot_svg(rows, name, get)?)?;
        files.push(path);
    }
    Ok(files)
}
