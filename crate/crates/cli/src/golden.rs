//! Reference tables shipped with the crate and the comparison against them.

use radspec_core::{BigReal, Error, Result};

use crate::output::{Cell, Table};

/// Relative tolerance of a golden comparison.
pub const GOLDEN_TOLERANCE: f64 = 5e-10;

/// One printed cell: row key (`N` or `D`), level and the value as printed.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenCell {
    pub row: usize,
    pub level: usize,
    pub printed: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoldenTable {
    Table1,
    Table2,
    Table3,
    Table4,
}

impl GoldenTable {
    pub const ALL: [GoldenTable; 4] = [Self::Table1, Self::Table2, Self::Table3, Self::Table4];

    fn source(self) -> &'static str {
        match self {
            Self::Table1 => include_str!("../golden/table1.csv"),
            Self::Table2 => include_str!("../golden/table2.csv"),
            Self::Table3 => include_str!("../golden/table3.csv"),
            Self::Table4 => include_str!("../golden/table4.csv"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::Table3 => "table3",
            Self::Table4 => "table4",
        }
    }

    pub fn cells(self) -> Result<Vec<GoldenCell>> {
        parse_golden(self.source())
    }
}

fn parse_golden(text: &str) -> Result<Vec<GoldenCell>> {
    let bad = |line: &str| Error::Internal(format!("malformed golden line `{line}`"));
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|line| {
            let mut f = line.splitn(4, ',');
            let row = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad(line))?;
            let level = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad(line))?;
            let printed = f.next().ok_or_else(|| bad(line))?.to_string();
            Ok(GoldenCell { row, level, printed })
        })
        .collect()
}

/// A golden cell that the computed table misses or disagrees with.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub row: usize,
    pub level: usize,
    pub expected: String,
    /// `None` when the computed table has no value there.
    pub found: Option<String>,
}

/// Compares `table` (first column the row key, then `W_0, W_1, ..`)
/// against every golden cell.
pub fn compare(table: &Table, golden: &[GoldenCell]) -> Result<Vec<Mismatch>> {
    let tol = BigReal::from_f64(GOLDEN_TOLERANCE);
    let mut out = Vec::new();
    for g in golden {
        let row = table
            .rows
            .iter()
            .find(|r| matches!(r.first(), Some(Cell::Int(k)) if *k == g.row as i64));
        let cell = row.and_then(|r| r.get(g.level + 1));
        let expected: BigReal = g.printed.parse()?;
        let found = match cell {
            Some(Cell::Real(v)) => Some(v),
            _ => None,
        };
        let ok = found.is_some_and(|v| (v - &expected).abs() <= expected.abs() * &tol);
        if !ok {
            out.push(Mismatch {
                row: g.row,
                level: g.level,
                expected: g.printed.clone(),
                found: found.map(|v| v.to_sig_string(crate::output::PRINT_DIGITS)),
            });
        }
    }
    Ok(out)
}
