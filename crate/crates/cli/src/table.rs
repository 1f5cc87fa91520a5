//! Tabular output with a fixed column order.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::fit::FitResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Floats use 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Uint(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or_else(|| Value::String(self.render())),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rows plus any fitted growth models.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub fits: Vec<FitResult>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), fits: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Float(v) => *v,
                Cell::Int(v) => *v as f64,
                Cell::Uint(v) => *v as f64,
                other => panic!("column {name} holds {other:?}"),
            })
            .collect()
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> anyhow::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            rows: Vec<Map<String, Value>>,
            fits: &'a [FitResult],
        }
        let rows = self
            .rows
            .iter()
            .map(|r| self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
            .collect();
        serde_json::to_writer_pretty(&mut out, &Doc { rows, fits: &self.fits })?;
        writeln!(out)?;
        Ok(())
    }

    pub fn to_bytes(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering() {
        let mut t = Table::new(&["t", "n", "name"]);
        t.push(vec![Cell::from(0.1), Cell::from(3u64), Cell::from("a,b")]);
        let s = String::from_utf8(t.to_bytes(Format::Csv).unwrap()).unwrap();
        assert_eq!(s, "t,n,name\n1.0000000000000001e-1,3,\"a,b\"\n");
    }

    #[test]
    fn json_rendering() {
        let mut t = Table::new(&["t", "ok"]);
        t.push(vec![Cell::from(2.5), Cell::from(true)]);
        let v: Value = serde_json::from_slice(&t.to_bytes(Format::Json).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["t"], 2.5);
        assert_eq!(v["rows"][0]["ok"], true);
    }
}
