//! CSV and JSON renderings of run records. Both go through the same rounding,
//! so the two formats carry identical numbers.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::filter::SweepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(usize),
    Bool(bool),
    Real(Option<f64>),
    /// Semicolon-joined in CSV, an array in JSON.
    List(Vec<f64>),
}

/// A table with a fixed header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

fn fixed(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    // no negative zero in reports
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn csv_cell(cell: &Cell, precision: usize) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Real(None) => String::new(),
        Cell::Real(Some(x)) => fixed(*x, precision),
        Cell::List(xs) => xs
            .iter()
            .map(|&x| fixed(x, precision))
            .collect::<Vec<_>>()
            .join(";"),
    }
}

fn json_number(x: f64, precision: usize) -> Value {
    let rounded: f64 = fixed(x, precision).parse().expect("formatted float");
    json!(rounded)
}

fn json_cell(cell: &Cell, precision: usize) -> Value {
    match cell {
        Cell::Text(s) => json!(s),
        Cell::Int(n) => json!(n),
        Cell::Bool(b) => json!(b),
        Cell::Real(None) => Value::Null,
        Cell::Real(Some(x)) => json_number(*x, precision),
        Cell::List(xs) => Value::Array(xs.iter().map(|&x| json_number(x, precision)).collect()),
    }
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write, format: Format, precision: usize) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| csv_cell(c, precision)))?;
                }
                w.flush()
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, c)| (k.to_string(), json_cell(c, precision)))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &records)?;
                writeln!(out)
            }
        }
    }
}

pub const RECORD_HEADER: [&str; 10] = [
    "refinement",
    "dim_window",
    "sigma_P",
    "d_selected",
    "gamma_est",
    "ritz_values",
    "pollution_flag",
    "dist_to_reference",
    "delta_gap",
    "delta_a_gap",
];

pub fn record_cells(r: &SweepRecord) -> Vec<Cell> {
    let gaps = r.gap_diagnostics;
    vec![
        Cell::Text(r.refinement.clone()),
        Cell::Int(r.dim_window),
        Cell::List(r.sigma_p.clone()),
        Cell::Int(r.d_selected),
        Cell::Real(r.gamma_est),
        Cell::List(r.ritz_values.clone()),
        Cell::Bool(r.pollution_flag),
        Cell::Real(r.dist_to_reference),
        Cell::Real(gaps.map(|g| g.delta)),
        Cell::Real(gaps.map(|g| g.delta_a)),
    ]
}

pub fn record_table(records: &[SweepRecord], galerkin_values: bool) -> Table {
    let mut header = RECORD_HEADER.to_vec();
    if galerkin_values {
        header.push("galerkin_values");
    }
    let mut table = Table::new(header);
    for r in records {
        let mut row = record_cells(r);
        if galerkin_values {
            row.push(Cell::List(r.galerkin_in_window.clone()));
        }
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["h", "x", "xs", "flag"]);
        t.push(vec![
            Cell::Text("1/8".into()),
            Cell::Real(Some(0.123456789)),
            Cell::List(vec![1.0, -1e-12]),
            Cell::Bool(true),
        ]);
        t.push(vec![
            Cell::Text("1/16".into()),
            Cell::Real(None),
            Cell::List(vec![]),
            Cell::Bool(false),
        ]);
        t
    }

    #[test]
    fn csv_rendering() {
        let mut out = Vec::new();
        sample().write(&mut out, Format::Csv, 8).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "h,x,xs,flag\n1/8,0.12345679,1.00000000;0.00000000,true\n1/16,,,false\n"
        );
    }

    #[test]
    fn json_numbers_equal_csv_numbers() {
        let mut out = Vec::new();
        sample().write(&mut out, Format::Json, 8).unwrap();
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v[0]["x"], json!(0.12345679));
        assert_eq!(v[0]["xs"], json!([1.0, 0.0]));
        assert_eq!(v[1]["x"], Value::Null);
    }
}
