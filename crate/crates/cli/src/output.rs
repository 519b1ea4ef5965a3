//! Tables and their CSV/JSON renderings. Floats use Rust's shortest
//! round-trip formatting, so identical values always print identically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::cli::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Flag(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => v.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Missing => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Flag(v) => json!(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    /// Flags such as `sub_cutoff` go to JSON only; the CSV schema is fixed.
    pub in_csv: bool,
}

impl Column {
    pub const fn csv(name: &'static str) -> Self {
        Self { name, in_csv: true }
    }

    pub const fn json_only(name: &'static str) -> Self {
        Self { name, in_csv: false }
    }
}

pub const DENSITY_COLUMNS: [Column; 6] = [
    Column::csv("omega"),
    Column::csv("x"),
    Column::csv("y"),
    Column::csv("sigma"),
    Column::csv("err"),
    Column::csv("n_terms"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let keep: Vec<usize> = (0..self.columns.len()).filter(|&i| self.columns[i].in_csv).collect();
        let mut out = String::new();
        let header: Vec<&str> = keep.iter().map(|&i| self.columns[i].name).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = keep.iter().map(|&i| row[i].csv()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, command: &str, parameters: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert(col.name.to_owned(), cell.json());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "command": command,
            "parameters": parameters,
            "columns": self.columns.iter().map(|c| c.name).collect::<Vec<_>>(),
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("JSON values are serializable");
        text.push('\n');
        text
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn emit(
    table: &Table,
    format: Format,
    path: Option<&Path>,
    command: &str,
    parameters: Value,
) -> Result<(), CliError> {
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(command, parameters),
    };
    write_text(path, &text)
}
