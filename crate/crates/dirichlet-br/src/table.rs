//! Plain CSV reading for proportion data and the fit report types.
//!
//! Dialect: comma-separated, decimal point, with an optional single header
//! row auto-detected by a non-numeric first line.

use serde::{Deserialize, Serialize};

use crate::adjust::Method;
use crate::error::{Error, Result};
use crate::solver::FitResult;

/// Parsed numeric matrix plus the optional header row.
#[derive(Debug, Clone)]
pub struct CsvData {
    pub rows: Vec<Vec<f64>>,
    pub headers: Option<Vec<String>>,
}

pub fn parse_csv(text: &str) -> Result<CsvData> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .peekable();

    let Some(first) = lines.peek().copied() else {
        return Err(Error::Parse("empty input".into()));
    };
    let first_fields: Vec<&str> = first.split(',').map(str::trim).collect();
    let headers = if first_fields.iter().any(|f| f.parse::<f64>().is_err()) {
        lines.next();
        Some(first_fields.into_iter().map(String::from).collect::<Vec<_>>())
    } else {
        None
    };

    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let mut row = Vec::new();
        for (col, field) in line.split(',').map(str::trim).enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Parse(format!(
                    "non-numeric cell '{field}' at data row {idx}, column {col}"
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    let m = rows[0].len();
    if let Some(h) = &headers {
        if h.len() != m {
            return Err(Error::Parse(format!(
                "header has {} fields but data rows have {m}",
                h.len()
            )));
        }
    }
    for (idx, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::Parse(format!(
                "data row {idx} has {} fields, expected {m}",
                row.len()
            )));
        }
    }
    Ok(CsvData { rows, headers })
}

pub fn read_csv(path: &str) -> Result<CsvData> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    parse_csv(&text)
}

/// Summary of the input data carried alongside the fits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataSummary {
    pub n: usize,
    pub m: usize,
    pub column_means: Vec<f64>,
    pub columns: Vec<String>,
}

/// JSON-serializable report mirroring the per-method fit results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub data: DataSummary,
    pub fits: Vec<FitResult>,
}

impl FitReport {
    /// Aligned text table, two decimals, one block row per estimate.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Data: n = {}, m = {} (columns: {})\n\n",
            self.data.n,
            self.data.m,
            self.data.columns.join(", ")
        ));
        let level = self
            .fits
            .first()
            .map(|f| f.ci_level * 100.0)
            .unwrap_or(95.0);
        out.push_str(&format!(
            "{:<12} {:<10} {:>10} {:>12} {:>20}\n",
            "method",
            "component",
            "estimate",
            "std. error",
            format!("{level:.0}% Wald CI")
        ));
        for fit in &self.fits {
            for r in 0..fit.estimate.len() {
                out.push_str(&format!(
                    "{:<12} {:<10} {:>10.2} {:>12.2} {:>20}\n",
                    fit.method.label(),
                    self.data.columns[r],
                    fit.estimate[r],
                    fit.std_errors[r],
                    format!("{:.2} - {:.2}", fit.ci_lower[r], fit.ci_upper[r])
                ));
            }
            if !fit.converged {
                out.push_str(&format!("  ({}: not converged)\n", fit.method.label()));
            }
        }
        out
    }
}

pub fn default_columns(m: usize, headers: Option<&Vec<String>>) -> Vec<String> {
    match headers {
        Some(h) => h.clone(),
        None => (1..=m).map(|j| format!("y{j}")).collect(),
    }
}

/// Parses a comma-separated method list like "ml,median-br".
pub fn parse_methods(spec: &str) -> Result<Vec<Method>> {
    let mut methods = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(Error::Usage("no methods requested".into()));
    }
    Ok(methods)
}
