//! Tabular experiment reports: a versioned CSV encoding and a JSON
//! mirror of the same rows.
//!
//! Every command collects its results into a [`Report`] — fixed column
//! names, one row per evaluation — and the renderers are pure functions
//! of that table, so a given report always serializes to identical
//! bytes. CSV starts with the schema marker line `#schema=1`; JSON wraps
//! the same cells in `{schema, command, columns, rows}`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

/// Version of the column layout emitted by all commands.
pub const SCHEMA_VERSION: u32 = 1;

/// One value in a report row.
///
/// Lists hold per-hop or per-coordinate values inside a single column so
/// the column set stays fixed while the network depth varies; in CSV
/// they render `;`-joined, in JSON as arrays/objects.
#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    U64(u64),
    F64(f64),
    Bool(bool),
    U32List(Vec<u32>),
    F64List(Vec<f64>),
    NamedF64List(Vec<(String, f64)>),
}

impl Cell {
    fn write_csv(&self, out: &mut String) {
        match self {
            Cell::Str(s) => out.push_str(s),
            Cell::U64(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::F64(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::U32List(vs) => {
                for (i, v) in vs.iter().enumerate() {
                    let _ = write!(out, "{}{v}", if i > 0 { ";" } else { "" });
                }
            }
            Cell::F64List(vs) => {
                for (i, v) in vs.iter().enumerate() {
                    let _ = write!(out, "{}{v}", if i > 0 { ";" } else { "" });
                }
            }
            Cell::NamedF64List(vs) => {
                for (i, (name, v)) in vs.iter().enumerate() {
                    let _ = write!(out, "{}{name}={v}", if i > 0 { ";" } else { "" });
                }
            }
        }
    }

    fn to_json(&self) -> Value {
        fn num(v: f64) -> Value {
            serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
        }
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::U64(v) => json!(v),
            Cell::F64(v) => num(*v),
            Cell::Bool(v) => json!(v),
            Cell::U32List(vs) => json!(vs),
            Cell::F64List(vs) => Value::Array(vs.iter().map(|v| num(*v)).collect()),
            Cell::NamedF64List(vs) => {
                let mut map = Map::new();
                for (name, v) in vs {
                    map.insert(name.clone(), num(*v));
                }
                Value::Object(map)
            }
        }
    }
}

/// How rendered reports leave the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A finished experiment result: named columns plus one row per
/// evaluation, in evaluation order.
#[derive(Debug)]
pub struct Report {
    command: &'static str,
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("#schema={SCHEMA_VERSION}\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write_csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut map = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    map.insert((*name).to_string(), cell.to_json());
                }
                Value::Object(map)
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
        });
        let mut text =
            serde_json::to_string_pretty(&doc).expect("report JSON has no non-string keys");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Write `text` to `out`, or to stdout when no path is given.
pub fn deliver(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write --out file `{}`", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .context("cannot write to stdout")
        }
    }
}
