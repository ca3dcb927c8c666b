//! Tables rendered as CSV or as JSON records.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::Format;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    UInt(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => "NaN".into(),
            Cell::Float(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            // 17 significant digits round-trip every double
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::UInt(x) => x.to_string(),
            Cell::Bool(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::UInt(x) => Value::from(*x),
            Cell::Bool(x) => Value::from(*x),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::UInt(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a subcommand produced: header fields plus one or more tables.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self { command, meta: Vec::new(), tables: Vec::new() }
    }

    pub fn meta(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.meta.push((key, value.into()));
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    /// Tables separated by one blank line; metadata is not repeated in CSV.
    fn render_csv(&self) -> String {
        let mut out = Vec::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push(b'\n');
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
            }
            out.extend(w.into_inner().expect("in-memory write"));
        }
        String::from_utf8(out).expect("utf-8 cells")
    }

    fn render_json(&self) -> String {
        let mut root = Map::new();
        root.insert("schema".into(), SCHEMA_VERSION.into());
        root.insert("command".into(), self.command.into());
        for (k, v) in &self.meta {
            root.insert((*k).into(), v.json());
        }
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().zip(r).map(|(c, v)| ((*c).to_string(), v.json())).collect()))
                .collect();
            root.insert(t.name.into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
