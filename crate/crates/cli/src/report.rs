//! Reports: JSON with a schema version and sorted keys, and a CSV summary table.

use std::io::Write;
use std::path::Path;

use btchar_finite_gl::Cyclo;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A cyclotomic number as its coefficient vector in `Z[ζ_m]` plus a decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloJson {
    pub modulus: u32,
    pub coefficients: Vec<i64>,
    pub decimal: String,
}

impl From<&Cyclo> for CycloJson {
    fn from(c: &Cyclo) -> Self {
        CycloJson { modulus: c.m, coefficients: c.c.clone(), decimal: c.render() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub parameters: Map<String, Value>,
    pub results: Vec<Value>,
    pub table: Table,
}

/// Converts to a JSON value; maps come out with sorted keys.
pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| CliError::Compute(format!("serialization: {e}")))
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        x => x,
    }
}

impl Report {
    pub fn new(command: &str, scenario: &str, table: Table) -> Report {
        Report { command: command.into(), scenario: scenario.into(), parameters: Map::new(), results: Vec::new(), table }
    }

    pub fn param<T: Serialize>(&mut self, key: &str, v: T) -> Result<()> {
        self.parameters.insert(key.into(), to_value(&v)?);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut top = Map::new();
        top.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        top.insert("command".into(), Value::from(self.command.clone()));
        top.insert("scenario".into(), Value::from(self.scenario.clone()));
        top.insert("parameters".into(), Value::Object(self.parameters.clone()));
        top.insert("results".into(), Value::Array(self.results.clone()));
        let v = sort_keys(Value::Object(top));
        let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Compute(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.table.header).map_err(io)?;
        for r in &self.table.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}
