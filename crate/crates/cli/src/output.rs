//! Deterministic CSV / JSON tables. Floats are always written with 17
//! significant digits (`{:.16e}`), in both formats.

use std::io::{self, Write};

use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Clone, Debug)]
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

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().map(Cell::json)).collect())
                })
                .collect(),
        )
    }
}

/// Everything one command emits: a primary table, optional secondary tables
/// and top-level summary fields.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub command: &'static str,
    pub summary: Vec<(&'static str, Cell)>,
    pub table: Table,
    pub extra: Vec<Table>,
}

impl Artifact {
    pub fn new(command: &'static str, table: Table) -> Self {
        Self { command, summary: Vec::new(), table, extra: Vec::new() }
    }

    pub fn with(mut self, key: &'static str, value: Cell) -> Self {
        self.summary.push((key, value));
        self
    }

    /// CSV: the primary table with its header; each extra table follows
    /// after a blank line, with its own header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in std::iter::once(&self.table).chain(&self.extra).enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for r in &t.rows {
                out.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command));
        for (k, v) in &self.summary {
            obj.insert(k.to_string(), v.json());
        }
        obj.insert("columns".into(), Value::from(self.table.columns.clone()));
        obj.insert("rows".into(), self.table.json_rows());
        for t in &self.extra {
            let mut sub = Map::new();
            sub.insert("columns".into(), Value::from(t.columns.clone()));
            sub.insert("rows".into(), t.json_rows());
            obj.insert(t.name.to_string(), Value::Object(sub));
        }
        to_json_string(&Value::Object(obj))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_string<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.begin_string(writer)
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    serde::Serialize::serialize(v, &mut ser).expect("serializing a JSON value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON output is UTF-8")
}
