use std::fmt;
use std::io::Write;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::{HarnessError, Result};

/// Rounds to 9 significant digits, the precision of every emitted float.
pub fn round9(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// One value of a table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn float(x: f64) -> Cell {
        Cell::Float(round9(x))
    }

    pub fn opt_float(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::float)
    }

    pub fn int(x: impl TryInto<i64>) -> Cell {
        x.try_into().map_or(Cell::Empty, Cell::Int)
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cell::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            _ => None,
        }
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => write!(f, "{x:?}"),
            Cell::Text(t) => f.write_str(t),
            Cell::Empty => Ok(()),
        }
    }
}

/// A column-ordered table, emitted as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| c.to_string())).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Json => {
                let objects: Vec<IndexMap<&str, &Cell>> = self
                    .rows
                    .iter()
                    .map(|r| self.columns.iter().map(String::as_str).zip(r).collect())
                    .collect();
                let mut s = serde_json::to_string_pretty(&objects).expect("cells serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Aggregates of one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub kind: String,
    pub point: usize,
    pub axis: Option<String>,
    pub value: Option<f64>,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_max_error: Option<f64>,
    pub ledger_epsilon: Option<f64>,
    pub ledger_delta: Option<f64>,
}

/// Metrics of a single trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub point: usize,
    pub trial: usize,
    #[serde(flatten)]
    pub metrics: IndexMap<String, Cell>,
}

impl TrialRow {
    pub fn get(&self, metric: &str) -> &Cell {
        self.metrics.get(metric).unwrap_or(&Cell::Empty)
    }
}

/// Output of an experiment: one summary per sweep point plus optional rows.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub summary: Vec<PointSummary>,
    #[serde(default)]
    pub rows: Vec<TrialRow>,
}

const SUMMARY_HEADER: &str =
    "kind,point,axis,value,trials,successes,success_rate,mean_max_error,ledger_epsilon,ledger_delta\n";

impl TrialReport {
    /// CSV carries the summary table; JSON carries summary and rows.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                if self.summary.is_empty() {
                    return Ok(SUMMARY_HEADER.to_string());
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                for s in &self.summary {
                    w.serialize(s).map_err(|e| HarnessError::Report(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| HarnessError::Report(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("utf-8"))
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Report(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => {
                let mut r = csv::Reader::from_reader(text.as_bytes());
                let summary = r
                    .deserialize()
                    .collect::<std::result::Result<Vec<PointSummary>, _>>()
                    .map_err(|e| HarnessError::Report(e.to_string()))?;
                Ok(TrialReport { summary, rows: Vec::new() })
            }
            Format::Json => serde_json::from_str(text).map_err(|e| HarnessError::Report(e.to_string())),
        }
    }

    /// Per-trial rows as a table with columns `point,trial,<metrics>`.
    pub fn rows_table(&self) -> Table {
        let mut columns = vec!["point".to_string(), "trial".to_string()];
        if let Some(first) = self.rows.first() {
            columns.extend(first.metrics.keys().cloned());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![Cell::int(r.point), Cell::int(r.trial)];
                cells.extend(columns[2..].iter().map(|c| r.get(c).clone()));
                cells
            })
            .collect();
        Table { columns, rows }
    }
}

/// Writes `text` to `destination`, or to stdout when `None`.
pub fn write_output(text: &str, destination: Option<&Path>) -> Result<()> {
    match destination {
        Some(path) => std::fs::write(path, text).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| HarnessError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Renders `report` and writes it to `destination` (stdout when `None`).
pub fn emit(report: &TrialReport, format: Format, destination: Option<&Path>) -> Result<()> {
    write_output(&report.render(format)?, destination)
}
