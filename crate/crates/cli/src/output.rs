use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use csv::{QuoteStyle, Terminator, WriterBuilder};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn is_finite(&self) -> bool {
        match self {
            Cell::Num(v) => v.is_finite(),
            _ => true,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// Shortest round-trip text; scientific notation outside `[1e-4, 1e15)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Num(v) => f.write_str(&format_number(*v)),
            Cell::Empty => Ok(()),
        }
    }
}

/// Columns and rows of one run, plus its summary figures.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub final_metric: f64,
    pub slope: Option<f64>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), final_metric: f64::NAN, slope: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Rejects NaN or infinite entries and summary values.
    pub fn check_finite(&self, experiment: &str) -> Result<(), CliError> {
        let cells_ok = self.rows.iter().flatten().all(Cell::is_finite);
        if !cells_ok || !self.final_metric.is_finite() || self.slope.is_some_and(|s| !s.is_finite()) {
            return Err(CliError::Numeric(format!("{experiment}: non-finite value in the output")));
        }
        Ok(())
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().quote_style(QuoteStyle::Never).terminator(Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_table(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut w = writer(std::fs::File::create(path)?);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::to_string))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub seed: u64,
    pub final_metric: f64,
    pub slope: Option<f64>,
    pub runtime_ms: u128,
}

pub const SUMMARY_COLUMNS: [&str; 5] = ["experiment", "seed", "final_metric", "slope", "runtime_ms"];

/// Append rows to `summary.csv`, writing the header when the file is new or empty.
pub fn append_summary(path: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let fresh = file.metadata()?.len() == 0;
    let mut w = writer(file);
    if fresh {
        w.write_record(SUMMARY_COLUMNS)?;
    }
    for r in rows {
        let slope = Cell::opt(r.slope).to_string();
        w.write_record([
            r.experiment.clone(),
            r.seed.to_string(),
            format_number(r.final_metric),
            slope,
            r.runtime_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
