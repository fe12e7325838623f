//! Tabular reports as CSV or JSON, floats with 17 significant digits.

use std::io::{Read, Write};

use serde_json::Value;

use super::config::OutputFormat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) if x.is_finite() => format_float(*x),
            Cell::Float(_) | Cell::Missing => "null".into(),
            Cell::Text(s) => Value::String(s.clone()).to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Missing, Into::into)
    }
}

/// Scientific notation with 17 significant digits, which round-trips f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row does not match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub fn emit_report<W: Write + ?Sized>(table: &Table, format: OutputFormat, w: &mut W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(&table.columns).map_err(csv_err)?;
            for row in &table.rows {
                out.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
            }
            out.flush()?;
        }
        OutputFormat::Json => {
            write!(w, "[")?;
            for (i, row) in table.rows.iter().enumerate() {
                if i > 0 {
                    write!(w, ",")?;
                }
                write!(w, "\n  {{")?;
                for (j, (col, cell)) in table.columns.iter().zip(row).enumerate() {
                    if j > 0 {
                        write!(w, ", ")?;
                    }
                    write!(w, "{}: {}", Value::String(col.clone()), cell.json())?;
                }
                write!(w, "}}")?;
            }
            writeln!(w, "{}]", if table.is_empty() { "" } else { "\n" })?;
        }
    }
    Ok(())
}

/// Read a CSV report back. Cells that parse as integers or floats are typed
/// accordingly; empty cells are [`Cell::Missing`].
pub fn read_csv_report<R: Read>(r: R) -> Result<Table> {
    let mut reader = csv::Reader::from_reader(r);
    let columns: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut table = Table { columns, rows: Vec::new() };
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| {
                if s.is_empty() {
                    Cell::Missing
                } else if let Ok(i) = s.parse::<i64>() {
                    Cell::Int(i)
                } else if let Ok(x) = s.parse::<f64>() {
                    Cell::Float(x)
                } else {
                    Cell::Text(s.to_string())
                }
            })
            .collect();
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emit(t: &Table, f: OutputFormat) -> String {
        let mut buf = Vec::new();
        emit_report(t, f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_and_single_row() {
        let mut t = Table::new(&["n", "value"]);
        assert_eq!(emit(&t, OutputFormat::Csv), "n,value\n");
        assert_eq!(emit(&t, OutputFormat::Json), "[]\n");
        t.push(vec![Cell::Int(6), Cell::Float(0.1)]);
        let csv = emit(&t, OutputFormat::Csv);
        assert_eq!(csv, "n,value\n6,1.0000000000000001e-1\n");
        assert_eq!(csv.lines().count(), 2);
        let json: Value = serde_json::from_str(&emit(&t, OutputFormat::Json)).unwrap();
        assert_eq!(json[0]["value"].as_f64(), Some(0.1));
        assert_eq!(json[0]["n"].as_i64(), Some(6));
    }

    #[test]
    fn missing_and_text_cells() {
        let mut t = Table::new(&["shape", "normalized"]);
        t.push(vec![Cell::from("0-1 1-2"), Cell::from(None::<f64>)]);
        let json: Value = serde_json::from_str(&emit(&t, OutputFormat::Json)).unwrap();
        assert!(json[0]["normalized"].is_null());
        let back = read_csv_report(emit(&t, OutputFormat::Csv).as_bytes()).unwrap();
        assert_eq!(back, t);
    }
}
