//! CSV persistence for aggregated results. Floats are written in shortest
//! round-trip form, so reading a file back reproduces the values exactly.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{ExperimentError, Result};
use crate::experiments::{AlphaReport, HalvesReport, ScalingPoint, TimeSeries};

pub const SCALING_COLUMNS: [&str; 7] = ["experiment", "N", "chi", "x", "ratio_mean", "ratio_std", "n_samples"];
pub const HALVES_COLUMNS: [&str; 8] =
    ["N", "chi", "split_index", "first_mean", "second_mean", "ratio_mean", "ratio_std", "n_samples"];
pub const ALPHA_COLUMNS: [&str; 8] =
    ["N", "chi", "x", "alpha_untruncated", "alpha_truncated", "ratio_mean", "ratio_std", "n_samples"];
pub const TIMESERIES_COLUMNS: [&str; 8] =
    ["N", "chi", "snapshot", "space_sum_mean", "space_sum_std", "max_line", "split_index", "n_samples"];

/// Which result table a CSV holds, judged from its header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvKind {
    Scaling,
    Halves,
    Alpha,
    TimeSeries,
}

fn opt(chi: Option<usize>) -> String {
    chi.map_or_else(String::new, |c| c.to_string())
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| ExperimentError::format(path, e))?;
    w.write_record(header).map_err(|e| ExperimentError::format(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| ExperimentError::format(path, e))?;
    }
    w.flush().map_err(|e| ExperimentError::io(path, e))
}

pub fn write_scaling_csv(path: &Path, points: &[ScalingPoint]) -> Result<()> {
    write_rows(
        path,
        &SCALING_COLUMNS,
        points.iter().map(|p| {
            vec![
                p.experiment.clone(),
                p.n.to_string(),
                p.chi.to_string(),
                p.x.to_string(),
                p.ratio_mean.to_string(),
                p.ratio_std.to_string(),
                p.n_samples.to_string(),
            ]
        }),
    )
}

pub fn write_halves_csv(path: &Path, reports: &[HalvesReport]) -> Result<()> {
    write_rows(
        path,
        &HALVES_COLUMNS,
        reports.iter().map(|r| {
            vec![
                r.n.to_string(),
                opt(r.chi),
                r.split_index.to_string(),
                r.first_mean.to_string(),
                r.second_mean.to_string(),
                r.ratio_mean.to_string(),
                r.ratio_std.to_string(),
                r.n_samples.to_string(),
            ]
        }),
    )
}

pub fn write_alpha_csv(path: &Path, reports: &[AlphaReport]) -> Result<()> {
    write_rows(
        path,
        &ALPHA_COLUMNS,
        reports.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.chi.to_string(),
                crate::theory::x_of(r.n, r.chi).to_string(),
                r.alpha_untruncated.to_string(),
                r.alpha_truncated.to_string(),
                r.ratio_mean.to_string(),
                r.ratio_std.to_string(),
                r.n_samples.to_string(),
            ]
        }),
    )
}

pub fn write_timeseries_csv(path: &Path, series: &[TimeSeries]) -> Result<()> {
    write_rows(
        path,
        &TIMESERIES_COLUMNS,
        series.iter().flat_map(|t| {
            (0..t.mean.len()).map(move |j| {
                vec![
                    t.n.to_string(),
                    opt(t.chi),
                    j.to_string(),
                    t.mean[j].to_string(),
                    t.std[j].to_string(),
                    t.max_line.to_string(),
                    t.split_index.to_string(),
                    t.n_samples.to_string(),
                ]
            })
        }),
    )
}

/// Header-indexed rows of a CSV file.
struct Table {
    path: std::path::PathBuf,
    header: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| ExperimentError::format(path, e))?;
        let header = r.headers().map_err(|e| ExperimentError::format(path, e))?.iter().map(str::to_owned).collect();
        let rows = r.records().collect::<Result<Vec<_>, _>>().map_err(|e| ExperimentError::format(path, e))?;
        Ok(Table { path: path.to_owned(), header, rows })
    }

    fn has(&self, column: &str) -> bool {
        self.header.iter().any(|h| h == column)
    }

    fn columns(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|name| {
                self.header.iter().position(|h| h == name).ok_or_else(|| ExperimentError::MissingColumn {
                    path: self.path.clone(),
                    column: (*name).into(),
                })
            })
            .collect()
    }

    fn parse<T: FromStr>(&self, row: usize, record: &csv::StringRecord, col: usize) -> Result<T> {
        let raw = record.get(col).unwrap_or("");
        raw.trim().parse().map_err(|_| {
            ExperimentError::format(
                &self.path,
                format!("row {}: column `{}` has unparsable value {raw:?}", row + 2, self.header[col]),
            )
        })
    }

    fn parse_opt(&self, row: usize, record: &csv::StringRecord, col: usize) -> Result<Option<usize>> {
        if record.get(col).unwrap_or("").trim().is_empty() {
            Ok(None)
        } else {
            self.parse(row, record, col).map(Some)
        }
    }
}

/// Recognizes the table kind from distinctive header columns.
pub fn detect_kind(path: &Path) -> Result<CsvKind> {
    let t = Table::read(path)?;
    if t.has("experiment") {
        Ok(CsvKind::Scaling)
    } else if t.has("snapshot") {
        Ok(CsvKind::TimeSeries)
    } else if t.has("alpha_truncated") || t.has("alpha_untruncated") {
        Ok(CsvKind::Alpha)
    } else if t.has("split_index") || t.has("first_mean") {
        Ok(CsvKind::Halves)
    } else {
        Err(ExperimentError::format(path, "unrecognized table: no `experiment`, `snapshot`, `alpha_truncated` or `split_index` column"))
    }
}

pub fn read_scaling_csv(path: &Path) -> Result<Vec<ScalingPoint>> {
    let t = Table::read(path)?;
    let c = t.columns(&SCALING_COLUMNS)?;
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(ScalingPoint {
                experiment: r.get(c[0]).unwrap_or("").to_owned(),
                n: t.parse(i, r, c[1])?,
                chi: t.parse(i, r, c[2])?,
                x: t.parse(i, r, c[3])?,
                ratio_mean: t.parse(i, r, c[4])?,
                ratio_std: t.parse(i, r, c[5])?,
                n_samples: t.parse(i, r, c[6])?,
            })
        })
        .collect()
}

pub fn read_halves_csv(path: &Path) -> Result<Vec<HalvesReport>> {
    let t = Table::read(path)?;
    let c = t.columns(&HALVES_COLUMNS)?;
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(HalvesReport {
                n: t.parse(i, r, c[0])?,
                chi: t.parse_opt(i, r, c[1])?,
                split_index: t.parse(i, r, c[2])?,
                first_mean: t.parse(i, r, c[3])?,
                second_mean: t.parse(i, r, c[4])?,
                ratio_mean: t.parse(i, r, c[5])?,
                ratio_std: t.parse(i, r, c[6])?,
                n_samples: t.parse(i, r, c[7])?,
            })
        })
        .collect()
}

pub fn read_alpha_csv(path: &Path) -> Result<Vec<AlphaReport>> {
    let t = Table::read(path)?;
    let c = t.columns(&ALPHA_COLUMNS)?;
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(AlphaReport {
                n: t.parse(i, r, c[0])?,
                chi: t.parse(i, r, c[1])?,
                alpha_untruncated: t.parse(i, r, c[3])?,
                alpha_truncated: t.parse(i, r, c[4])?,
                ratio_mean: t.parse(i, r, c[5])?,
                ratio_std: t.parse(i, r, c[6])?,
                n_samples: t.parse(i, r, c[7])?,
            })
        })
        .collect()
}

pub fn read_timeseries_csv(path: &Path) -> Result<Vec<TimeSeries>> {
    let t = Table::read(path)?;
    let c = t.columns(&TIMESERIES_COLUMNS)?;
    let mut out: Vec<TimeSeries> = Vec::new();
    for (i, r) in t.rows.iter().enumerate() {
        let n: usize = t.parse(i, r, c[0])?;
        let chi = t.parse_opt(i, r, c[1])?;
        let snapshot: usize = t.parse(i, r, c[2])?;
        let current = match out.last_mut() {
            Some(s) if s.n == n && s.chi == chi => s,
            _ => {
                out.push(TimeSeries {
                    n,
                    chi,
                    mean: Vec::new(),
                    std: Vec::new(),
                    max_line: t.parse(i, r, c[5])?,
                    split_index: t.parse(i, r, c[6])?,
                    n_samples: t.parse(i, r, c[7])?,
                });
                out.last_mut().expect("just pushed")
            }
        };
        if snapshot != current.mean.len() {
            return Err(ExperimentError::format(path, format!("row {}: snapshot {snapshot} out of sequence", i + 2)));
        }
        current.mean.push(t.parse(i, r, c[3])?);
        current.std.push(t.parse(i, r, c[4])?);
    }
    Ok(out)
}
