//! Tabular output as CSV or JSON.

use radspec_core::{BigReal, Error, Result};
use serde_json::{Map, Number, Value};

/// Significant digits of every printed real.
pub const PRINT_DIGITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Int(i64),
    Real(BigReal),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => v.to_sig_string(PRINT_DIGITS),
            Cell::Text(t) => t.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Real(v) => Number::from_f64(v.to_f64()).map_or(Value::Null, Value::Number),
            Cell::Text(t) => Value::from(t.as_str()),
        }
    }
}

impl From<BigReal> for Cell {
    fn from(v: BigReal) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<BigReal>> for Cell {
    fn from(v: Option<BigReal>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        emit_csv(&self.rows, &self.header)
    }

    /// Array of objects keyed by the header; blank cells become `null`.
    pub fn to_json(&self) -> Result<Value> {
        check_rectangular(&self.rows, &self.header)?;
        Ok(Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.header.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        ))
    }
}

fn check_rectangular(rows: &[Vec<Cell>], header: &[String]) -> Result<()> {
    match rows.iter().position(|r| r.len() != header.len()) {
        Some(k) => Err(Error::Internal(format!(
            "row {k} has {} cells, header has {}",
            rows[k].len(),
            header.len()
        ))),
        None => Ok(()),
    }
}

/// Header line then one line per row, `\n`-terminated.
pub fn emit_csv(rows: &[Vec<Cell>], header: &[String]) -> Result<Vec<u8>> {
    check_rectangular(rows, header)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let out = emit_csv(&[vec![Cell::Real(BigReal::from(4))]], &["W_0".to_string()]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "W_0\n4.000000000\n");
    }

    #[test]
    fn header_only() {
        let out = emit_csv(&[], &["a".to_string(), "b".to_string()]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b\n");
    }

    #[test]
    fn ragged_rows_are_internal_errors() {
        let rows = vec![vec![Cell::Int(1), Cell::Int(2)], vec![Cell::Int(3)]];
        let err = emit_csv(&rows, &["a".to_string(), "b".to_string()]).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn json_uses_null_for_blanks() {
        let mut t = Table::new(vec!["N".into(), "W_0".into()]);
        t.push(vec![Cell::Int(2), Cell::Empty]);
        assert_eq!(t.to_json().unwrap().to_string(), r#"[{"N":2,"W_0":null}]"#);
    }
}
