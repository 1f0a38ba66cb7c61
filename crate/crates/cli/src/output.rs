//! Tables of results and their CSV/JSON rendering.

use std::io::{self, Write};

use serde_json::{Map, Number, Value};

/// `%.10e`: ten digits after the point, signed two-digit exponent.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // No negative zero.
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.10e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Count(usize),
    Text(String),
    Flag(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => sci(*x),
            Cell::Count(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
            Cell::Missing => "n/a".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // The value the CSV text parses back to.
            Cell::Num(x) => sci(*x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Count(n) => Value::from(*n),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(name, cell)| (name.to_string(), cell.json()))
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
