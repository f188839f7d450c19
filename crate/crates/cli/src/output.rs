//! Table output in CSV or JSON, with a machine-readable header carrying
//! everything needed to reproduce the run.

use serde_json::{json, Value};
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
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

#[derive(Debug, Clone)]
pub struct Meta {
    /// full command line as invoked
    pub command: String,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub tolerances: Vec<(&'static str, f64)>,
}

impl Meta {
    pub fn new(seed: Option<u64>) -> Self {
        Self {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            tolerances: Vec::new(),
        }
    }

    pub fn with_tol(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.push((name, value));
        self
    }

    pub fn to_json(&self) -> Value {
        let tols: serde_json::Map<String, Value> = self
            .tolerances
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "command": self.command,
            "seed": self.seed,
            "version": self.version,
            "tolerances": tols,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

// 17 significant digits: round-trips every f64 exactly
fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell_csv(c: &Cell) -> String {
    match c {
        Cell::Num(v) => fmt_num(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => json!(v),
        Cell::Int(v) => json!(v),
        Cell::Text(s) => json!(s),
    }
}

pub fn render(meta: &Meta, table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# command = {}\n", meta.command));
            if let Some(s) = meta.seed {
                out.push_str(&format!("# seed = {s}\n"));
            }
            out.push_str(&format!("# version = {}\n", meta.version));
            for (k, v) in &meta.tolerances {
                out.push_str(&format!("# tol.{k} = {v:e}\n"));
            }
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(cell_csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(cell_json).collect()))
                .collect();
            let doc = json!({
                "meta": meta.to_json(),
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("table serialization");
            s.push('\n');
            s
        }
    }
}

pub fn emit(content: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}
