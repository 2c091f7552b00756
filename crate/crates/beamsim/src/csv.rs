//! CSV output: `#`-prefixed metadata lines, one header row, then data rows.
//!
//! Values are written as `{:.8e}` (nine significant digits) so identical
//! inputs give identical bytes regardless of shortest-representation quirks.
//! Non-finite values are spelled `nan`, `inf` and `-inf`.

use std::fmt::Write as _;

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvResult {
    pub experiment: String,
    /// Resolved configuration and run facts, echoed as `# key = value`.
    pub metadata: Vec<(String, String)>,
    /// Headline numbers, echoed as `# summary.key = value`.
    pub summary: Vec<(String, String)>,
    /// Leading columns identifying a row.
    pub axes: Vec<String>,
    /// Remaining columns, one per computed series.
    pub series: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 {
        // Avoid "-0.00000000e0".
        format!("{:.8e}", 0.0)
    } else {
        format!("{v:.8e}")
    }
}

pub fn parse_value(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

impl CsvResult {
    pub fn new(experiment: impl Into<String>, axes: &[&str], series: Vec<String>) -> Self {
        Self {
            experiment: experiment.into(),
            metadata: Vec::new(),
            summary: Vec::new(),
            axes: axes.iter().map(|s| s.to_string()).collect(),
            series,
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.axes.iter().chain(&self.series).map(String::as_str)
    }

    pub fn width(&self) -> usize {
        self.axes.len() + self.series.len()
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.width(), "row width");
        self.rows.push(row);
    }

    pub fn add_summary(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.summary.push((key.into(), value.into()));
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns().position(|c| c == name)
    }

    /// All values of one column.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# experiment = {}", self.experiment);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# summary.{k} = {v}");
        }
        let header: Vec<&str> = self.columns().collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Text report printed next to the CSV.
    pub fn summary_text(&self) -> String {
        let mut out = format!("{}\n", self.experiment);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k} = {v}");
        }
        out
    }

    /// Parses the output of [`render`](Self::render). Axis columns must be
    /// named in `n_axes` since the file does not mark them.
    pub fn parse(text: &str, n_axes: usize) -> AppResult<Self> {
        let bad = |msg: String| AppError::config(format!("csv: {msg}"));
        let mut experiment = String::new();
        let mut metadata = Vec::new();
        let mut summary = Vec::new();
        let mut lines = text.lines();
        let header = loop {
            let line = lines.next().ok_or_else(|| bad("missing header".into()))?;
            let Some(meta) = line.strip_prefix("# ") else {
                break line;
            };
            let (k, v) = meta
                .split_once(" = ")
                .ok_or_else(|| bad(format!("malformed metadata line {line:?}")))?;
            if k == "experiment" {
                experiment = v.to_string();
            } else if let Some(s) = k.strip_prefix("summary.") {
                summary.push((s.to_string(), v.to_string()));
            } else {
                metadata.push((k.to_string(), v.to_string()));
            }
        };
        let cols: Vec<String> = header.split(',').map(String::from).collect();
        if n_axes > cols.len() {
            return Err(bad("fewer columns than axes".into()));
        }
        let mut rows = Vec::new();
        for line in lines {
            let row = line
                .split(',')
                .map(|c| parse_value(c).ok_or_else(|| bad(format!("bad value {c:?}"))))
                .collect::<AppResult<Vec<f64>>>()?;
            if row.len() != cols.len() {
                return Err(bad(format!("row has {} cells, header has {}", row.len(), cols.len())));
            }
            rows.push(row);
        }
        let (axes, series) = cols.split_at(n_axes);
        Ok(Self {
            experiment,
            metadata,
            summary,
            axes: axes.to_vec(),
            series: series.to_vec(),
            rows,
        })
    }
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Merges results that share their axis columns into one table with every
/// series side by side. Identical series (such as an ideal bound shared by
/// several runs) are kept once; clashing names get a `@<run>` suffix.
pub fn compare(results: &[CsvResult]) -> AppResult<CsvResult> {
    let (first, rest) = results
        .split_first()
        .ok_or_else(|| AppError::config("compare: no results"))?;
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let n_axes = first.axes.len();
    let axis_rows: Vec<&[f64]> = first.rows.iter().map(|r| &r[..n_axes]).collect();
    for (i, r) in rest.iter().enumerate() {
        if r.experiment != first.experiment || r.axes != first.axes {
            return Err(AppError::config(format!(
                "compare: run {} has different experiment or axis columns",
                i + 1
            )));
        }
        let same = r.rows.len() == first.rows.len()
            && r.rows.iter().zip(&axis_rows).all(|(row, ax)| same_bits(&row[..n_axes], ax));
        if !same {
            return Err(AppError::config(format!(
                "compare: run {} has different axis values",
                i + 1
            )));
        }
    }

    let mut merged = CsvResult::new(first.experiment.clone(), &[], Vec::new());
    merged.axes = first.axes.clone();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (run, r) in results.iter().enumerate() {
        for (k, v) in &r.metadata {
            merged.metadata.push((format!("run{run}.{k}"), v.clone()));
        }
        for (k, v) in &r.summary {
            merged.summary.push((format!("run{run}.{k}"), v.clone()));
        }
        for (j, name) in r.series.iter().enumerate() {
            let values: Vec<f64> = r.rows.iter().map(|row| row[n_axes + j]).collect();
            match merged.series.iter().position(|s| s == name) {
                Some(idx) if same_bits(&columns[idx], &values) => continue,
                Some(_) => merged.series.push(format!("{name}@{run}")),
                None => merged.series.push(name.clone()),
            }
            columns.push(values);
        }
    }
    for (i, ax) in axis_rows.iter().enumerate() {
        let mut row = ax.to_vec();
        row.extend(columns.iter().map(|c| c[i]));
        merged.rows.push(row);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(series: &str, vals: [f64; 2]) -> CsvResult {
        let mut r = CsvResult::new("rate-vs-distance", &["distance_m"], vec![series.into(), "ideal".into()]);
        r.metadata.push(("seed".into(), "1".into()));
        r.push_row(vec![1.0, vals[0], 3.0]);
        r.push_row(vec![2.0, vals[1], 3.0]);
        r
    }

    #[test]
    fn formatting() {
        assert_eq!(format_value(1.0), "1.00000000e0");
        assert_eq!(format_value(-0.0), "0.00000000e0");
        assert_eq!(format_value(123456.789012), "1.23456789e5");
        assert_eq!(format_value(f64::NAN), "nan");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn render_parse_round_trip() {
        let mut r = sample("rate_pdf", [0.5, f64::INFINITY]);
        r.add_summary("min", "0.5");
        let text = r.render();
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let back = CsvResult::parse(&text, 1).unwrap();
        assert_eq!(back.render(), text);
        assert_eq!(back.summary, r.summary);
    }

    #[test]
    fn compare_single_is_identity() {
        let r = sample("rate_pdf", [0.5, 0.6]);
        assert_eq!(compare(std::slice::from_ref(&r)).unwrap(), r);
    }

    #[test]
    fn compare_merges_and_dedupes() {
        let a = sample("rate_pdf", [0.5, 0.6]);
        let b = sample("rate_far_field_dpp", [0.4, 0.3]);
        let c = sample("rate_pdf", [0.1, 0.2]);
        let m = compare(&[a, b, c]).unwrap();
        assert_eq!(m.series, ["rate_pdf", "ideal", "rate_far_field_dpp", "rate_pdf@2"]);
        assert_eq!(m.rows[1], vec![2.0, 0.6, 3.0, 0.3, 0.2]);
    }

    #[test]
    fn compare_rejects_axis_mismatch() {
        let a = sample("rate_pdf", [0.5, 0.6]);
        let mut b = a.clone();
        b.rows[0][0] = 1.5;
        assert!(compare(&[a, b]).is_err());
    }
}
