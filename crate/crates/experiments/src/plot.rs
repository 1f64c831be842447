//! SVG figures rendered from the aggregated tables alone.

use std::collections::BTreeMap;
use std::path::Path;

use plotters::prelude::*;

use crate::error::{ExperimentError, Result};
use crate::experiments::{AlphaReport, HalvesReport, ScalingPoint, TimeSeries};
use crate::theory::theory_curve;

const SIZE: (u32, u32) = (720, 520);

fn plot_err(path: &Path, e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::format(path, format!("plotting failed: {e}"))
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    }
    Ok(())
}

/// Samples of the theory curve on `(0, 1]`, ending exactly at `(1, 1)`.
pub fn theory_overlay(points: usize) -> Vec<(f64, f64)> {
    let points = points.max(2);
    (1..=points)
        .map(|k| {
            let x = k as f64 / points as f64;
            (x, theory_curve(x).expect("x in (0, 1]"))
        })
        .collect()
}

/// Padded y-range covering every `value ± err`, or `fallback` with no data.
fn y_range(values: impl Iterator<Item = (f64, f64)>, extra: &[f64], fallback: (f64, f64)) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (v, e) in values {
        if v.is_finite() {
            lo = lo.min(v - e.abs());
            hi = hi.max(v + e.abs());
        }
    }
    for &v in extra {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return fallback;
    }
    let pad = ((hi - lo) * 0.08).max(0.05);
    (lo.min(0.0).max(lo - pad), hi + pad)
}

fn color(i: usize) -> RGBColor {
    let c = Palette99::pick(i).to_rgba();
    RGBColor(c.0, c.1, c.2)
}

/// Ratio against `x = 2·log2(χ)/N` with error bars, one series per N.
pub fn plot_scaling(path: &Path, points: &[ScalingPoint], title: &str, overlay_theory: bool) -> Result<()> {
    scaling_chart(path, points, title, overlay_theory, None)
}

fn scaling_chart(
    path: &Path,
    points: &[ScalingPoint],
    title: &str,
    overlay_theory: bool,
    reference: Option<(f64, &str)>,
) -> Result<()> {
    ensure_parent(path)?;
    let mut by_n: BTreeMap<usize, Vec<&ScalingPoint>> = BTreeMap::new();
    for p in points {
        by_n.entry(p.n).or_default().push(p);
    }
    let mut extra: Vec<f64> = if overlay_theory { vec![0.0, 1.0] } else { Vec::new() };
    extra.extend(reference.map(|r| r.0));
    let (ylo, yhi) = y_range(points.iter().map(|p| (p.ratio_mean, p.ratio_std)), &extra, (0.0, 1.2));

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(path, e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(0.0..1.05f64, ylo..yhi)
        .map_err(|e| plot_err(path, e))?;
    chart
        .configure_mesh()
        .x_desc("x = 2 log2(chi) / N")
        .y_desc("ratio")
        .draw()
        .map_err(|e| plot_err(path, e))?;

    for (i, (n, pts)) in by_n.iter().enumerate() {
        let c = color(i);
        chart
            .draw_series(pts.iter().map(|p| {
                ErrorBar::new_vertical(p.x, p.ratio_mean - p.ratio_std, p.ratio_mean, p.ratio_mean + p.ratio_std, c.filled(), 6)
            }))
            .map_err(|e| plot_err(path, e))?
            .label(format!("N = {n}"))
            .legend(move |(x, y)| Circle::new((x + 8, y), 4, c.filled()));
    }
    if overlay_theory {
        chart
            .draw_series(LineSeries::new(theory_overlay(200), BLACK.stroke_width(2)))
            .map_err(|e| plot_err(path, e))?
            .label("H(x)")
            .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], BLACK.stroke_width(2)));
        chart
            .draw_series(std::iter::once(Cross::new((1.0, 1.0), 6, BLACK.stroke_width(2))))
            .map_err(|e| plot_err(path, e))?;
    }
    if let Some((y, label)) = reference {
        chart
            .draw_series(LineSeries::new(vec![(0.0, y), (1.05, y)], RED.stroke_width(2)))
            .map_err(|e| plot_err(path, e))?
            .label(label)
            .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], RED.stroke_width(2)));
    }
    if by_n.is_empty() && !overlay_theory && reference.is_none() {
        // Keep a legend box even without data.
        chart
            .draw_series(std::iter::empty::<Circle<(f64, f64), i32>>())
            .map_err(|e| plot_err(path, e))?
            .label("no data")
            .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], BLACK));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .position(SeriesLabelPosition::LowerRight)
        .draw()
        .map_err(|e| plot_err(path, e))?;
    root.present().map_err(|e| plot_err(path, e))
}

/// First/second-part ratios by N, with a reference line at 0.5.
pub fn plot_halves(path: &Path, reports: &[HalvesReport]) -> Result<()> {
    ensure_parent(path)?;
    let (ylo, yhi) = y_range(reports.iter().map(|r| (r.ratio_mean, r.ratio_std)), &[0.0, 0.5], (0.0, 1.0));
    let labels: Vec<String> = reports
        .iter()
        .map(|r| match r.chi {
            None => format!("N={}", r.n),
            Some(c) => format!("N={} chi={c}", r.n),
        })
        .collect();
    let count = reports.len().max(1);

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(path, e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption("first / second half mean space sum", ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(-0.5..(count as f64 - 0.5), ylo..yhi)
        .map_err(|e| plot_err(path, e))?;
    chart
        .configure_mesh()
        .x_labels(count)
        .x_label_formatter(&|v| {
            let k = v.round();
            if (v - k).abs() < 1e-6 && k >= 0.0 {
                labels.get(k as usize).cloned().unwrap_or_default()
            } else {
                String::new()
            }
        })
        .y_desc("ratio")
        .draw()
        .map_err(|e| plot_err(path, e))?;
    chart
        .draw_series(reports.iter().enumerate().map(|(i, r)| {
            ErrorBar::new_vertical(i as f64, r.ratio_mean - r.ratio_std, r.ratio_mean, r.ratio_mean + r.ratio_std, color(0).filled(), 8)
        }))
        .map_err(|e| plot_err(path, e))?
        .label("mean ± std")
        .legend(|(x, y)| Circle::new((x + 8, y), 4, color(0).filled()));
    chart
        .draw_series(LineSeries::new(vec![(-0.5, 0.5), (count as f64 - 0.5, 0.5)], RED.stroke_width(2)))
        .map_err(|e| plot_err(path, e))?
        .label("1 : 2")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], RED.stroke_width(2)));
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(path, e))?;
    root.present().map_err(|e| plot_err(path, e))
}

/// Capped/untruncated alpha quotient against x, one series per N, with a
/// reference line at 1.
pub fn plot_alpha(path: &Path, reports: &[AlphaReport]) -> Result<()> {
    let points: Vec<ScalingPoint> = reports
        .iter()
        .map(|r| ScalingPoint {
            experiment: "alpha".into(),
            n: r.n,
            chi: r.chi,
            x: crate::theory::x_of(r.n, r.chi),
            ratio_mean: r.ratio_mean,
            ratio_std: r.ratio_std,
            n_samples: r.n_samples,
        })
        .collect();
    scaling_chart(path, &points, "alpha (capped) / alpha (untruncated)", false, Some((1.0, "equal alpha")))
}

/// Mean space sum against snapshot index, with the maximum line and a
/// vertical marker at the split index.
pub fn plot_timeseries(path: &Path, series: &TimeSeries) -> Result<()> {
    ensure_parent(path)?;
    let len = series.mean.len().max(1);
    let (ylo, yhi) =
        y_range(series.mean.iter().copied().zip(series.std.iter().copied()), &[0.0, series.max_line], (0.0, 1.0));
    let title = match series.chi {
        None => format!("space sum, N = {}, untruncated", series.n),
        Some(c) => format!("space sum, N = {}, chi = {c}", series.n),
    };

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(path, e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(0.0..len as f64, ylo..yhi)
        .map_err(|e| plot_err(path, e))?;
    chart
        .configure_mesh()
        .x_desc("CNOT index")
        .y_desc("sum of bond entropies")
        .draw()
        .map_err(|e| plot_err(path, e))?;
    chart
        .draw_series(series.mean.iter().zip(&series.std).enumerate().map(|(j, (&m, &s))| {
            ErrorBar::new_vertical(j as f64 + 1.0, m - s, m, m + s, color(0).filled(), 3)
        }))
        .map_err(|e| plot_err(path, e))?
        .label("mean ± std")
        .legend(|(x, y)| Circle::new((x + 8, y), 3, color(0).filled()));
    chart
        .draw_series(LineSeries::new(vec![(0.0, series.max_line), (len as f64, series.max_line)], RED.stroke_width(2)))
        .map_err(|e| plot_err(path, e))?
        .label("maximum")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], RED.stroke_width(2)));
    let split = series.split_index as f64 + 0.5;
    chart
        .draw_series(LineSeries::new(vec![(split, ylo), (split, yhi)], BLUE.stroke_width(1)))
        .map_err(|e| plot_err(path, e))?
        .label("split")
        .legend(|(x, y)| PathElement::new(vec![(x + 8, y - 6), (x + 8, y + 6)], BLUE.stroke_width(1)));
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .position(SeriesLabelPosition::LowerRight)
        .draw()
        .map_err(|e| plot_err(path, e))?;
    root.present().map_err(|e| plot_err(path, e))
}
