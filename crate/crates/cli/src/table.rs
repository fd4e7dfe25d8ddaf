//! Tabular output shared by the table-producing subcommands.
//!
//! Numbers are written with 17 significant digits in both formats so a value
//! parses to the same `f64` from CSV and from JSON. Exact values travel as
//! strings.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::value::RawValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Text as written to CSV; non-finite numbers are empty.
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x).unwrap_or_default(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x).map_or_else(|| "null".into(), |s| raw(&s)),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn raw(s: &str) -> String {
    RawValue::from_string(s.to_owned()).expect("valid JSON number").get().to_owned()
}

/// `d.dddddddddddddddde±x`, or `None` for NaN and infinities.
pub fn format_number(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputTable {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| (*h).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; its length must match the headers.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row length must equal header length");
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv_text))?;
                }
                w.flush()
            }
            Format::Json => {
                writeln!(out, "[")?;
                for (i, row) in self.rows.iter().enumerate() {
                    let fields: Vec<String> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, c)| format!("{}: {}", serde_json::to_string(h).expect("strings serialize"), c.json_text()))
                        .collect();
                    let sep = if i + 1 < self.rows.len() { "," } else { "" };
                    writeln!(out, "  {{{}}}{sep}", fields.join(", "))?;
                }
                writeln!(out, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputTable {
        let mut t = OutputTable::new(&["n", "value", "label", "ok"]);
        t.push(vec![Cell::Int(0), Cell::Num(-0.618_033_988_749_894_9), Cell::Text("a, \"b\"".into()), Cell::Bool(true)]);
        t.push(vec![Cell::Int(1), Cell::Num(f64::NAN), Cell::Text("1/2 - √5".into()), Cell::Bool(false)]);
        t
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_number(0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(format_number(-2.0).unwrap(), "-2.0000000000000000e0");
        assert_eq!(format_number(f64::INFINITY), None);
    }

    #[test]
    fn csv_and_json_agree() {
        let t = sample();
        let mut c = Vec::new();
        let mut j = Vec::new();
        t.write(Format::Csv, &mut c).unwrap();
        t.write(Format::Json, &mut j).unwrap();
        let json: serde_json::Value = serde_json::from_slice(&j).unwrap();
        let mut rdr = csv::Reader::from_reader(c.as_slice());
        for (rec, obj) in rdr.records().zip(json.as_array().unwrap()) {
            let rec = rec.unwrap();
            assert_eq!(rec[0].parse::<i64>().unwrap(), obj["n"].as_i64().unwrap());
            match obj["value"].as_f64() {
                Some(v) => assert_eq!(rec[1].parse::<f64>().unwrap(), v),
                None => assert!(rec[1].is_empty()),
            }
            assert_eq!(&rec[2], obj["label"].as_str().unwrap());
            assert_eq!(rec[3].parse::<bool>().unwrap(), obj["ok"].as_bool().unwrap());
        }
    }

    #[test]
    #[should_panic(expected = "row length")]
    fn ragged_rows_are_rejected() {
        OutputTable::new(&["a", "b"]).push(vec![Cell::Int(1)]);
    }
}
