//! Result tables written as UTF-8 CSV with a `name:unit` header line.

use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    pub fn header(&self) -> String {
        format!("{}:{}", self.name, self.unit)
    }

    pub fn parse(header: &str) -> Option<Self> {
        let (name, unit) = header.split_once(':')?;
        Some(Self::new(name, unit))
    }

    /// Cells of text columns are free-form; all others must be finite numbers.
    pub fn is_text(&self) -> bool {
        self.unit == "text"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// Value not available (failed row or not applicable).
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // shortest round-trip representation; `+ 0.0` folds -0.0 into 0.0
            Cell::Num(v) => write!(f, "{:?}", v + 0.0),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub schema: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(schema: impl Into<String>, columns: Vec<Column>) -> Self {
        Self {
            schema: schema.into(),
            columns,
            rows: Vec::new(),
        }
    }

    fn schema_error(&self, detail: String) -> Error {
        Error::Schema {
            schema: self.schema.clone(),
            detail,
        }
    }

    /// Append a row after checking its width and cell kinds.
    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(self.schema_error(format!(
                "row has {} cells, expected {}",
                row.len(),
                self.columns.len()
            )));
        }
        for (cell, col) in row.iter().zip(&self.columns) {
            let ok = match cell {
                Cell::Num(v) => v.is_finite() && !col.is_text(),
                Cell::Int(_) => !col.is_text(),
                Cell::Text(_) => col.is_text(),
                Cell::Empty => true,
            };
            if !ok {
                return Err(self.schema_error(format!("cell `{cell}` does not fit column {}", col.header())));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric values of column `name`; empty cells become `None`.
    pub fn numbers(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| self.schema_error(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Num(v) => Ok(Some(*v)),
                Cell::Int(v) => Ok(Some(*v as f64)),
                Cell::Empty => Ok(None),
                Cell::Text(t) => Err(self.schema_error(format!("text `{t}` in numeric column `{name}`"))),
            })
            .collect()
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(Column::header))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
    }

    /// Write the table and return the file's SHA-256 digest.
    pub fn write(&self, path: &Path) -> Result<String> {
        let bytes = self.to_csv_bytes()?;
        std::fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }

    /// Read a table written by [`ResultTable::write`]; the schema must match `columns` if given.
    pub fn read(path: &Path, schema: &str, columns: Option<&[Column]>) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
        let schema_error = |detail: String| Error::Schema {
            schema: schema.into(),
            detail,
        };
        let header: Vec<Column> = r
            .headers()?
            .iter()
            .map(|h| Column::parse(h).ok_or_else(|| schema_error(format!("header `{h}` is not name:unit"))))
            .collect::<Result<_>>()?;
        if let Some(expect) = columns {
            if header != expect {
                return Err(schema_error(format!("header does not match the `{schema}` schema")));
            }
        }
        let mut table = Self::new(schema, header);
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .zip(&table.columns)
                .map(|(s, col)| {
                    if s.is_empty() {
                        Ok(Cell::Empty)
                    } else if col.is_text() {
                        Ok(Cell::Text(s.into()))
                    } else if let Ok(v) = s.parse::<u64>() {
                        Ok(Cell::Int(v))
                    } else {
                        s.parse::<f64>()
                            .map(Cell::Num)
                            .map_err(|_| schema_error(format!("`{s}` in column {} is not numeric", col.header())))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
        }
        Ok(table)
    }
}

/// Column layouts of every emitted table.
pub mod schema {
    use super::Column;
    use superrad_core::qfi::LABELS;

    fn cols(layout: &[(&str, &str)]) -> Vec<Column> {
        layout.iter().map(|(n, u)| Column::new(*n, *u)).collect()
    }

    pub fn steady() -> Vec<Column> {
        cols(&[
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("ix", "1"),
            ("iz", "1"),
            ("jz", "1"),
            ("j2", "1"),
            ("e2", "1"),
            ("flux_residual", "1"),
            ("status", "text"),
        ])
    }

    /// Fit rows `y(N)/N² = X + Y/N + Z/N²` per ratio and observable.
    pub fn fit() -> Vec<Column> {
        cols(&[
            ("ratio", "W/Gamma_c"),
            ("observable", "text"),
            ("x", "1"),
            ("y", "1"),
            ("z", "1"),
            ("residual", "1"),
            ("n_values", "text"),
            ("status", "text"),
        ])
    }

    pub fn g2() -> Vec<Column> {
        cols(&[
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("g2x", "1"),
            ("g2z", "1"),
            ("g2_thermal", "1"),
            ("ix", "1"),
            ("iz", "1"),
            ("var_ix", "1"),
            ("var_iz", "1"),
            ("status", "text"),
        ])
    }

    pub fn traj_qfi() -> Vec<Column> {
        let mut c = cols(&[
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("trajectory", "1"),
            ("time", "1/Gamma_c"),
            ("lambda_max", "1"),
            ("f_accel", "1"),
            ("gap", "1"),
            ("sql", "1"),
        ]);
        c.extend(LABELS.iter().map(|l| Column::new(format!("c_{l}"), "1")));
        c
    }

    pub fn traj_jumps() -> Vec<Column> {
        cols(&[
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("trajectory", "1"),
            ("time", "1/Gamma_c"),
            ("channel", "text"),
            ("crossing_error", "1"),
        ])
    }

    pub fn traj_summary() -> Vec<Column> {
        cols(&[
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("trajectory", "1"),
            ("t_final", "1/Gamma_c"),
            ("jumps", "1"),
            ("post_min_lambda_over_n2", "1"),
            ("post_fraction_above", "1"),
            ("initial_lambda_max", "1"),
        ])
    }

    pub fn entropy() -> Vec<Column> {
        cols(&[
            ("state", "text"),
            ("n_atoms", "1"),
            ("ratio", "W/Gamma_c"),
            ("s_full", "nats"),
            ("s_j", "nats"),
            ("s_k", "nats"),
            ("i_j_k", "nats"),
            ("i_k_j", "nats"),
            ("n_ln2", "nats"),
            ("status", "text"),
        ])
    }

    pub fn rates() -> Vec<Column> {
        cols(&[
            ("n_atoms", "1"),
            ("pump", "freq"),
            ("decay", "freq"),
            ("ratio", "W/Gamma_c"),
            ("n_pump_over_kappa_z", "1"),
            ("n_decay_over_kappa_x", "1"),
            ("pump_valid", "text"),
            ("decay_valid", "text"),
        ])
    }
}
