use std::io::Write;

use serde_json::json;
use sha2::{Digest, Sha256};

use robust_transfer::tensor::SchattenP;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Fixed 12-significant-digit scientific notation; `inf` and `nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    format!("{x:.11e}")
}

pub fn exponent(p: SchattenP) -> String {
    match p {
        SchattenP::Infinity => "inf".into(),
        SchattenP::Finite(v) => num(v),
    }
}

/// Rows of string cells under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell of `row` under `name`.
    pub fn get(&self, row: usize, name: &str) -> Option<&str> {
        self.column(name).map(|c| self.rows[row][c].as_str())
    }
}

/// Hex SHA-256 of the canonical config description.
pub fn config_hash(description: &str) -> String {
    hex::encode(Sha256::digest(description.as_bytes()))
}

pub fn write_table<W: Write>(out: W, table: &Table, format: Format, hash: &str) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(out, table, hash),
        Format::Json => write_json(out, table, hash),
    }
}

fn write_csv<W: Write>(mut out: W, table: &Table, hash: &str) -> std::io::Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    writeln!(out, "#tool-version={TOOL_VERSION};config-hash={hash}")
}

fn write_json<W: Write>(mut out: W, table: &Table, hash: &str) -> std::io::Result<()> {
    let doc = json!({
        "columns": table.columns,
        "rows": table.rows,
        "tool_version": TOOL_VERSION,
        "config_hash": hash,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
