//! Tabular output: a header plus typed cells, serialized as CSV (shortest
//! round-trip decimals) or JSON.

use std::fmt;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            // Rust's default float Display is the shortest representation
            // that round-trips, which keeps golden files stable
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Bool(v) => write!(f, "{v}"),
        }
    }
}

impl Cell {
    fn to_json(self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(v),
            Cell::Float(v) => serde_json::Number::from_f64(v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Bool(v) => serde_json::Value::from(v),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurveTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CurveTable {
    pub fn new(header: &[&str]) -> Self {
        CurveTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let value = serde_json::json!({
            "header": self.header,
            "rows": self.rows.iter()
                .map(|r| r.iter().map(|c| c.to_json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&value)?)
    }
}
