//! Time-indexed diagnostic tables with CSV output.

use crate::error::{Result, WkgError};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl DiagnosticsSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends one sample. The first push fixes the column set; times must
    /// increase strictly and values must be finite and non-negative.
    pub fn push(&mut self, t: f64, values: Vec<(String, f64)>) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(WkgError::Input(format!("sample time {t} does not exceed {last}")));
            }
        }
        if self.columns.is_empty() {
            self.columns = values.iter().map(|(n, _)| n.clone()).collect();
        } else if self.columns.len() != values.len() || self.columns.iter().zip(&values).any(|(a, (b, _))| a != b) {
            return Err(WkgError::Input("diagnostic columns changed between samples".into()));
        }
        if let Some((name, v)) = values.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(WkgError::Numerical {
                t,
                what: format!("diagnostic {name} = {v} is not finite and non-negative"),
            });
        }
        self.times.push(t);
        self.rows.push(values.into_iter().map(|(_, v)| v).collect());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// RFC-4180 CSV preceded by a `#` comment line carrying `stamp`.
    pub fn write_csv<W: Write>(&self, mut w: W, stamp: &str) -> Result<()> {
        writeln!(w, "# generated {stamp}")?;
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend(self.columns.iter().cloned());
        wr.write_record(&header)?;
        for (t, row) in self.times.iter().zip(&self.rows) {
            let mut rec = vec![format_num(*t)];
            rec.extend(row.iter().map(|v| format_num(*v)));
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads back a table written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        let header = rd.headers()?.clone();
        let columns: Vec<String> = header.iter().skip(1).map(String::from).collect();
        let mut out = DiagnosticsSeries { columns, ..Default::default() };
        for rec in rd.records() {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| WkgError::Input(format!("bad number {s:?}: {e}"))))
                .collect::<Result<_>>()?;
            out.times.push(vals[0]);
            out.rows.push(vals[1..].to_vec());
        }
        Ok(out)
    }
}

/// Shortest representation that round-trips, `.` as decimal separator.
pub fn format_num(x: f64) -> String {
    format!("{x:e}")
}
