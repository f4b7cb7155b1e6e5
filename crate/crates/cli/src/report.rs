use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A header line plus data rows, each already comma-joined.
#[derive(Clone, Debug)]
pub struct Table {
    pub header: String,
    pub rows: Vec<String>,
}

impl Table {
    pub fn new(header: impl Into<String>) -> Self {
        Table {
            header: header.into(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, fields: impl IntoIterator<Item = impl ToString>) {
        let cells: Vec<String> = fields.into_iter().map(|f| csv_cell(&f.to_string())).collect();
        self.rows.push(cells.join(","));
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.clone();
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }

    /// Columns padded to a common width.
    fn to_text(&self) -> String {
        let lines: Vec<Vec<String>> = std::iter::once(&self.header)
            .chain(&self.rows)
            .map(|l| split_csv(l))
            .collect();
        let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| lines.iter().filter_map(|l| l.get(c)).map(String::len).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for l in &lines {
            let cells: Vec<String> = l.iter().enumerate().map(|(c, v)| format!("{v:>w$}", w = widths[c])).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    cells.push(cur);
    cells
}

/// The result of one command on one input.
pub struct Report {
    pub json: Value,
    pub table: Table,
}

impl Report {
    pub fn new(value: &impl Serialize, table: Table) -> Result<Self, CliError> {
        Ok(Report {
            json: serde_json::to_value(value).map_err(|e| CliError::Output(e.to_string()))?,
            table,
        })
    }
}

/// Renders one report, or a batch of `(label, report)` pairs from `--file`.
pub fn render(mut reports: Vec<(String, Report)>, format: Format) -> Result<String, CliError> {
    if reports.len() == 1 {
        let (_, r) = reports.pop().unwrap();
        return Ok(match format {
            Format::Json => pretty(&r.json)?,
            Format::Csv => r.table.to_csv(),
            Format::Text => r.table.to_text(),
        });
    }
    match format {
        Format::Json => pretty(&Value::Array(reports.into_iter().map(|(_, r)| r.json).collect())),
        Format::Csv | Format::Text => {
            let mut merged = Table::new(format!("set,{}", reports[0].1.table.header));
            for (label, r) in &reports {
                for row in &r.table.rows {
                    merged.rows.push(format!("{},{row}", csv_cell(label)));
                }
            }
            Ok(if format == Format::Csv {
                merged.to_csv()
            } else {
                merged.to_text()
            })
        }
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(s).unwrap();
    Ok(s)
}
