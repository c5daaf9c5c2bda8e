//! Result tables and their CSV / JSON encodings.

use crate::CliError;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
    /// not applicable for this row (empty CSV field, JSON null)
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub tool: String,
    pub version: String,
    pub tolerances: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// seconds since the Unix epoch; the only field that varies between runs
    pub timestamp: u64,
}

/// 17 significant digits, enough to re-parse to the same bits.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_float(*v),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Cell::Missing => String::new(),
    }
}

fn json_value(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Missing => Value::Null,
    }
}

fn check_nonempty(t: &Table) -> Result<(), CliError> {
    if t.rows.is_empty() {
        return Err(CliError::EmptyTable);
    }
    Ok(())
}

pub fn to_csv(t: &Table) -> Result<String, CliError> {
    check_nonempty(t)?;
    let mut s = t.columns.join(",");
    s.push('\n');
    for row in &t.rows {
        let line: Vec<String> = row.iter().map(csv_field).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn to_json(t: &Table, meta: &Metadata) -> Result<String, CliError> {
    check_nonempty(t)?;
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(json_value)).collect()))
        .collect();
    let mut doc = Map::new();
    doc.insert("metadata".into(), serde_json::to_value(meta).map_err(|e| CliError::Io(e.to_string()))?);
    doc.insert("rows".into(), Value::Array(rows));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
