use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Column schema plus rows of JSON scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the schema");
        self.rows.push(row);
    }

    /// Rows taken from serialisable records, fields picked by column name.
    pub fn from_records<T: Serialize>(columns: &[&str], records: &[T]) -> Self {
        let mut t = Self::new(columns);
        for r in records {
            let v = serde_json::to_value(r).expect("record serialises");
            t.push(columns.iter().map(|c| v.get(*c).cloned().unwrap_or(Value::Null)).collect());
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub artifact: String,
    pub version: String,
    pub experiment: String,
    pub config_sha256: String,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(table: &ResultTable, meta: &Metadata, format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            writeln!(buf, "# {} {}", meta.artifact, meta.version).expect("vec write");
            writeln!(buf, "# experiment: {}", meta.experiment).expect("vec write");
            writeln!(buf, "# config_sha256: {}", meta.config_sha256).expect("vec write");
            writeln!(buf, "# config: {}", meta.config).expect("vec write");
            if let Some(w) = meta.wall_clock_s {
                writeln!(buf, "# wall_clock_s: {w:.6}").expect("vec write");
            }
            let mut w = csv::Writer::from_writer(&mut buf);
            let io = |e: csv::Error| BenchError::Runtime(e.to_string());
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(cell)).map_err(io)?;
            }
            w.flush().map_err(|e| BenchError::Runtime(e.to_string()))?;
        }
        Format::Json => {
            let doc = json!({ "metadata": meta, "columns": table.columns, "rows": table.rows });
            serde_json::to_writer_pretty(&mut buf, &doc).map_err(|e| BenchError::Runtime(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
            }
            std::fs::write(p, bytes).map_err(|e| BenchError::io(p, e))
        }
        None => std::io::stdout().write_all(bytes).map_err(|e| BenchError::Io(format!("stdout: {e}"))),
    }
}
