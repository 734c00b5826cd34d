//! Flat result rows and their CSV / JSON / table renderings.

use std::collections::BTreeSet;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value as Json};

use crate::params::ExactRational;

/// Keys that lead every row, in this order; the rest follow alphabetically.
const LEADING_KEYS: [&str; 3] = ["n", "m", "q"];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(BigUint),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v.into())
    }
}

impl From<&BigUint> for Value {
    fn from(v: &BigUint) -> Self {
        Value::Int(v.clone())
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&ExactRational> for Value {
    fn from(v: &ExactRational) -> Self {
        Value::Text(format!("{}/{}", v.numer(), v.denom()))
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(x) => format_sig10(*x),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => match v.to_u64() {
                Some(x) => json!(x),
                None => json!(v.to_string()),
            },
            Value::Real(x) => format_sig10(*x)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map_or(Json::Null, |v| json!(v)),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
            Value::Null => Json::Null,
        }
    }
}

/// Formats with 10 significant digits: plain decimal for moderate
/// magnitudes, scientific notation outside `[1e-5, 1e15)`.
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if !(-5..15).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    let point = exp + 1;
    let (int_part, frac_part) = if point <= 0 {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-point) as usize), digits),
        )
    } else if point as usize >= digits.len() {
        (
            format!("{}{}", digits, "0".repeat(point as usize - digits.len())),
            String::new(),
        )
    } else {
        let (a, b) = digits.split_at(point as usize);
        (a.to_string(), b.to_string())
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// One result row: a flat key/value map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputRecord {
    fields: Vec<(String, Value)>,
}

impl OutputRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_owned(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }
}

/// Column order: `n, m, q` (those present), then every other key
/// alphabetically.
pub fn column_order(rows: &[OutputRecord]) -> Vec<String> {
    let all: BTreeSet<&str> = rows.iter().flat_map(|r| r.keys()).collect();
    let mut cols: Vec<String> = LEADING_KEYS
        .iter()
        .filter(|k| all.contains(*k))
        .map(|k| k.to_string())
        .collect();
    cols.extend(
        all.into_iter()
            .filter(|k| !LEADING_KEYS.contains(k))
            .map(str::to_owned),
    );
    cols
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

pub fn write_rows(
    out: &mut dyn Write,
    format: Format,
    command: &str,
    rows: &[OutputRecord],
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, command, rows),
        Format::Table => write_table(out, rows),
    }
}

fn write_csv(out: &mut dyn Write, rows: &[OutputRecord]) -> io::Result<()> {
    let cols = column_order(rows);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&cols)?;
    for row in rows {
        w.write_record(
            cols.iter()
                .map(|c| row.get(c).map(Value::text).unwrap_or_default()),
        )?;
    }
    w.flush()
}

fn write_json(out: &mut dyn Write, command: &str, rows: &[OutputRecord]) -> io::Result<()> {
    let rows: Vec<Json> = rows
        .iter()
        .map(|r| {
            let obj: Map<String, Json> = r
                .fields
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect();
            Json::Object(obj)
        })
        .collect();
    let doc = json!({ "command": command, "rows": rows });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

fn write_table(out: &mut dyn Write, rows: &[OutputRecord]) -> io::Result<()> {
    let cols = column_order(rows);
    if rows.len() == 1 {
        let width = cols.iter().map(String::len).max().unwrap_or(0);
        for c in &cols {
            let v = rows[0].get(c).map(Value::text).unwrap_or_default();
            writeln!(out, "{c:<width$}  {v}")?;
        }
        return Ok(());
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|c| r.get(c).map(Value::text).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&cols))?;
    for r in &cells {
        writeln!(out, "{}", line(r))?;
    }
    Ok(())
}
