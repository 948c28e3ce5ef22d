//! Deterministic CSV/JSON writers.
//!
//! CSV numbers use `{:.16e}` (17 significant digits), comma delimiters and
//! `\n` line endings, header row first. JSON is one object: every column is an
//! array under its name, summary fields are scalars, and `config` echoes the
//! run. Non-finite numbers become the strings `inf`, `-inf`, `NaN` in JSON.

use std::io::Write;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_number(*x),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, name: &str, values: impl IntoIterator<Item = f64>) -> Self {
        self.push(name, values.into_iter().map(Cell::Num).collect());
        self
    }

    pub fn text(mut self, name: &str, values: impl IntoIterator<Item = String>) -> Self {
        self.push(name, values.into_iter().map(Cell::Text).collect());
        self
    }

    fn push(&mut self, name: &str, column: Vec<Cell>) {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.len(), column.len(), "column {name} has the wrong length");
        }
        self.names.push(name.to_string());
        self.columns.push(column);
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.names)?;
        for i in 0..self.n_rows() {
            w.write_record(self.columns.iter().map(|c| c[i].csv()))?;
        }
        w.flush()?;
        Ok(())
    }

    fn extend_json(&self, map: &mut Map<String, Value>) {
        for (name, col) in self.names.iter().zip(&self.columns) {
            map.insert(name.clone(), Value::Array(col.iter().map(Cell::json).collect()));
        }
    }
}

/// Named scalar results, written as `field,value` rows in CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    fields: Vec<(String, Cell)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, name: &str, value: f64) -> Self {
        self.fields.push((name.to_string(), Cell::Num(value)));
        self
    }

    pub fn text(mut self, name: &str, value: impl Into<String>) -> Self {
        self.fields.push((name.to_string(), Cell::Text(value.into())));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["field", "value"])?;
        for (name, cell) in &self.fields {
            w.write_record([name.clone(), cell.csv()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub summary: Option<Summary>,
    pub table: Option<Table>,
}

impl Document {
    pub fn to_json(&self, config: Value) -> Value {
        let mut map = Map::new();
        map.insert("config".into(), config);
        if let Some(s) = &self.summary {
            for (name, cell) in &s.fields {
                map.insert(name.clone(), cell.json());
            }
        }
        if let Some(t) = &self.table {
            t.extend_json(&mut map);
        }
        Value::Object(map)
    }
}
