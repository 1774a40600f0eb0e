//! Table, CSV and JSON rendering of result rows.

use clap::ValueEnum;
use serde::Serialize;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Table,
    Csv,
    Json,
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
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
        x.map_or(Cell::Empty, Into::into)
    }
}

/// A row type that knows its column names and cell values.
pub trait Row: Serialize {
    fn header() -> Vec<&'static str>;
    fn cells(&self) -> Vec<Cell>;
}

/// Fifteen significant digits, fixed-point where that stays readable.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..15).contains(&e) {
        format!("{:.*}", (14 - e) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

fn render(cell: &Cell, precise: bool) -> String {
    match cell {
        Cell::Num(x) if precise => x.to_string(),
        Cell::Num(x) => sig15(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

/// Write rows in the requested format. JSON mode writes one object per line.
pub fn emit<R: Row, W: Write>(rows: &[R], output: Output, mut out: W) -> io::Result<()> {
    match output {
        Output::Json => {
            for r in rows {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
        }
        Output::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::header())?;
            for r in rows {
                w.write_record(r.cells().iter().map(|c| render(c, true)))?;
            }
            w.flush()?;
        }
        Output::Table => {
            let header: Vec<String> = R::header().iter().map(|s| s.to_string()).collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.cells().iter().map(|c| render(c, false)).collect())
                .collect();
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for line in &body {
                for (w, c) in widths.iter_mut().zip(line) {
                    *w = (*w).max(c.len());
                }
            }
            for line in std::iter::once(&header).chain(&body) {
                let cols: Vec<String> = line
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                writeln!(out, "{}", cols.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}
