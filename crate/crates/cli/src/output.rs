use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value as Json};
use swssb_core::ExtendedReal;

use crate::error::{CliError, CliResult};

/// Bumped whenever a column is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Ext(ExtendedReal),
    Text(String),
    Empty,
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
fn float_text(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) | Cell::Ext(ExtendedReal::Finite(v)) => float_text(*v),
            Cell::Ext(ExtendedReal::PosInf) => "inf".into(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Ext(ExtendedReal::Finite(v)) => json!(v),
            Cell::Ext(ExtendedReal::PosInf) => json!("inf"),
            Cell::Text(s) => json!(s),
            Cell::Empty => Json::Null,
        }
    }

    fn is_nan(&self) -> bool {
        matches!(self, Cell::Float(v) | Cell::Ext(ExtendedReal::Finite(v)) if v.is_nan())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<Option<u64>> for Cell {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Cell::Empty, Cell::Int)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    fn check(&self) -> CliResult<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(Cell::is_nan) {
                return Err(CliError::Output(format!(
                    "NaN in row {i}, column {}",
                    self.columns[c]
                )));
            }
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> CliResult<()> {
        self.check()?;
        let io = |e: std::io::Error| CliError::Output(e.to_string());
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(w);
                let err = |e: csv::Error| CliError::Output(e.to_string());
                out.write_record(&self.columns).map_err(err)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::text)).map_err(err)?;
                }
                out.flush().map_err(io)
            }
            Format::Json => {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "columns": self.columns,
                    "rows": self.rows.iter()
                        .map(|r| r.iter().map(Cell::json).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                });
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, &doc)
                    .map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(w).map_err(io)
            }
        }
    }

    pub fn to_bytes(&self, format: Format) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(&mut buf, format)?;
        Ok(buf)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub schema: u32,
    pub backend: String,
    pub config_hash: String,
    pub code_version: String,
    pub seed: Option<u64>,
    pub threads: usize,
    pub rows: usize,
    pub wall_time_s: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["name", "value", "stderr"]);
        t.push(vec!["R1".into(), 0.5.into(), Cell::Empty]);
        t.push(vec!["Drel".into(), Cell::Ext(ExtendedReal::PosInf), 1e-3.into()]);
        let csv = String::from_utf8(t.to_bytes(Format::Csv).unwrap()).unwrap();
        assert_eq!(csv, "name,value,stderr\nR1,0.5,\nDrel,inf,0.001\n");
        assert_eq!(float_text(1.25e-13), "1.25e-13");
        assert_eq!(float_text(-3.0), "-3");
        let js: Json = serde_json::from_slice(&t.to_bytes(Format::Json).unwrap()).unwrap();
        assert_eq!(js["rows"][1][1], "inf");
        assert_eq!(js["rows"][0][2], Json::Null);
    }

    #[test]
    fn nan_aborts() {
        let mut t = Table::new(&["v"]);
        t.push(vec![f64::NAN.into()]);
        assert!(t.to_bytes(Format::Csv).is_err());
    }
}
