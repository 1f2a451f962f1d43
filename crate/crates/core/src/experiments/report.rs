use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::{fit_loglog, LogLogFit};
use crate::error::{Error, Result};
use crate::spectral::write_atomic;

use super::plan::MIN_FIT_POINTS;

#[derive(Clone, Debug, PartialEq)]
pub enum PointStatus {
    Ok,
    BlowUp(String),
    Failed(String),
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }

    fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::BlowUp(_) => "blowup",
            PointStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub value: f64,
    pub values: Vec<f64>,
    pub status: PointStatus,
}

/// Log-log fit of one series against the swept parameter. `fit` is `None`
/// when fewer than three usable points exist.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedFit {
    pub name: String,
    pub fit: Option<LogLogFit>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub fits: Vec<NamedFit>,
    pub metadata: Vec<(String, String)>,
}

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.15e}")
    } else {
        "nan".into()
    }
}

fn fmt_log(v: f64) -> String {
    if v > 0.0 && v.is_finite() {
        format!("{:.15e}", v.log10())
    } else {
        "nan".into()
    }
}

/// Fits `y` against `x` over the points where both are positive and finite.
pub fn fit_series(name: &str, x: &[f64], y: &[f64]) -> NamedFit {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite()).map(|(a, b)| (*a, *b)).unzip();
    let fit = if xs.len() >= MIN_FIT_POINTS { fit_loglog(&xs, &ys).ok() } else { None };
    NamedFit { name: name.to_string(), fit, points: xs.len() }
}

impl ExperimentReport {
    pub fn new(name: &str, parameter: &str, columns: Vec<String>, metadata: Vec<(String, String)>) -> Self {
        Self { name: name.into(), parameter: parameter.into(), columns, rows: Vec::new(), fits: Vec::new(), metadata }
    }

    /// Adds a row; rows stay ordered by parameter value.
    pub fn push(&mut self, row: ReportRow) -> Result<()> {
        if row.values.len() != self.columns.len() {
            return Err(Error::ShapeMismatch { expected: self.columns.len(), got: row.values.len() });
        }
        let at = self.rows.partition_point(|r| r.value < row.value);
        self.rows.insert(at, row);
        Ok(())
    }

    /// Refits every column from the healthy rows.
    pub fn fit_columns(&mut self) {
        let ok: Vec<&ReportRow> = self.rows.iter().filter(|r| r.status.is_ok()).collect();
        let x: Vec<f64> = ok.iter().map(|r| r.value).collect();
        let fits: Vec<NamedFit> = self
            .columns
            .iter()
            .enumerate()
            .map(|(c, name)| {
                let y: Vec<f64> = ok.iter().map(|r| r.values[c]).collect();
                fit_series(name, &x, &y)
            })
            .collect();
        self.fits.retain(|f| !self.columns.contains(&f.name));
        self.fits.splice(0..0, fits);
    }

    pub fn add_fit(&mut self, fit: NamedFit) {
        self.fits.retain(|f| f.name != fit.name);
        self.fits.push(fit);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[c]).collect())
    }

    pub fn fit(&self, name: &str) -> Option<&LogLogFit> {
        self.fits.iter().find(|f| f.name == name).and_then(|f| f.fit.as_ref())
    }

    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status.is_ok())
    }

    /// Tab-separated table: header line, then one line per point.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut head = vec![self.parameter.clone(), format!("log10_{}", self.parameter)];
        for c in &self.columns {
            head.push(c.clone());
            head.push(format!("log10_{c}"));
        }
        head.push("status".into());
        out.push_str(&head.join("\t"));
        out.push('\n');
        for r in &self.rows {
            let mut cells = vec![fmt_value(r.value), fmt_log(r.value)];
            for v in &r.values {
                cells.push(fmt_value(*v));
                cells.push(fmt_log(*v));
            }
            cells.push(r.status.label().into());
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    /// `key = value` lines: plan metadata, fits, per-point failures.
    pub fn metadata_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "report = {}", self.name);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "{k} = {v}");
        }
        for f in &self.fits {
            match &f.fit {
                Some(fit) => {
                    let _ = writeln!(out, "fit.{}.slope = {:.15e}", f.name, fit.slope);
                    let _ = writeln!(out, "fit.{}.intercept = {:.15e}", f.name, fit.intercept);
                    let _ = writeln!(out, "fit.{}.residual = {:.15e}", f.name, fit.rms_residual);
                }
                None => {
                    let _ = writeln!(out, "fit.{}.slope = none (only {} usable points)", f.name, f.points);
                }
            }
        }
        for r in &self.rows {
            if let PointStatus::BlowUp(m) | PointStatus::Failed(m) = &r.status {
                let _ = writeln!(out, "point.{}.{} = {}", r.value, r.status.label(), m.replace('\n', " "));
            }
        }
        out
    }

    /// Writes `<stem>.tsv` and `<stem>.meta` into `dir`, each atomically.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let table = dir.join(format!("{stem}.tsv"));
        let meta = dir.join(format!("{stem}.meta"));
        write_atomic(&table, self.to_tsv().as_bytes())?;
        write_atomic(&meta, self.metadata_text().as_bytes())?;
        Ok((table, meta))
    }
}
