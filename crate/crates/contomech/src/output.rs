//! Run results and the files they are written to.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::ScenarioConfig;
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A CSV table; every column carries a unit (`1` for pure numbers).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|(c, u)| (c.to_string(), u.to_string())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|(c, _)| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[idx] {
                    Cell::Num(v) => *v,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn write_csv(&self, w: impl Write) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let header: Vec<String> = self.columns.iter().map(|(c, u)| format!("{c} [{u}]")).collect();
        out.write_record(&header)?;
        for row in &self.rows {
            // `{:e}` prints the shortest digits that read back to the same f64
            out.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => format!("{v:e}"),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        out.flush()
    }
}

/// Everything a scenario produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    /// Machine-readable summary written to `report.json`.
    pub summary: Map<String, Value>,
    /// Named snapshots; written as `<name>.cwom`.
    pub snapshots: Vec<(String, Snapshot)>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

/// Numbers that JSON cannot hold become strings.
pub fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(format!("{v}")), Value::Number)
}

/// Write the effective config, the report and every table and snapshot into
/// `dir`; returns the written paths.
pub fn write_all(dir: &Path, cfg: &ScenarioConfig, report: &Report) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: &[u8]| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        written.push(path);
        Ok(())
    };
    put("effective.toml", cfg.effective().as_bytes())?;
    let mut summary = report.summary.clone();
    summary.insert("scenario".into(), Value::String(cfg.scenario.name().into()));
    summary.insert("warnings".into(), Value::Array(report.warnings.iter().cloned().map(Value::String).collect()));
    let mut json = serde_json::to_vec_pretty(&Value::Object(summary)).map_err(io::Error::other)?;
    json.push(b'\n');
    put("report.json", &json)?;
    for t in &report.tables {
        let mut buf = Vec::new();
        t.write_csv(&mut buf)?;
        put(&format!("{}.csv", t.name), &buf)?;
    }
    for (name, s) in &report.snapshots {
        let path = dir.join(format!("{name}.cwom"));
        let mut w = BufWriter::new(fs::File::create(&path)?);
        s.write_to(&mut w)?;
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_names_units_and_numbers_round_trip() {
        let mut t = Table::new("obs", &[("t", "s"), ("regime", "1")]);
        let x = 0.1 + 0.2;
        t.push(vec![x.into(), "overdamped".into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t [s],regime [1]"));
        let row = lines.next().unwrap();
        let v: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert_eq!(v.to_bits(), x.to_bits());
        assert_eq!(t.column("t"), Some(vec![x]));
    }
}
