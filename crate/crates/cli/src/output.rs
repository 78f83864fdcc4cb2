//! Rendering of command results as aligned text, JSON or CSV.

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A command result: parameters, scalar summary fields and a table of rows.
#[derive(Debug, Default)]
pub struct Envelope {
    pub command: String,
    pub params: Map<String, Value>,
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Envelope {
    pub fn new(command: &str) -> Self {
        Envelope {
            command: command.to_string(),
            ..Envelope::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.columns = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().cloned())
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), self.command.clone().into());
        doc.insert("params".into(), Value::Object(self.params.clone()));
        doc.insert("summary".into(), Value::Object(self.summary.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(plain).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn to_text(&self) -> String {
        let mut s = format!("# {}", self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={}", plain(v)));
        }
        s.push('\n');
        let width = self.summary.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.summary {
            s.push_str(&format!("{k:<width$}  {}\n", plain(v)));
        }
        if self.columns.is_empty() {
            return s;
        }
        if !self.summary.is_empty() {
            s.push('\n');
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(plain).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: Vec<&str>| -> String {
            let parts: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:>w$}"))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        s.push_str(&line(self.columns.iter().map(String::as_str).collect()));
        for r in &cells {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        if self.rows.is_empty() {
            s.push_str("(no rows)\n");
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `x` rounded to 12 significant digits, as a JSON number.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    Value::Number(Number::from_f64(rounded).expect("finite"))
}

/// `x` truncated toward zero to three decimals.
pub fn truncated(x: f64) -> Value {
    float((x * 1000.0).trunc() / 1000.0)
}
