//! CSV and JSON emission shared by every command.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub version: String,
}

impl Meta {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.into(),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// A record with a fixed CSV layout.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

pub fn write_csv<T: CsvRow, W: Write>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::header())?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: &'a Meta,
    rows: &'a [T],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a serde_json::Value>,
}

/// `{meta, rows}` plus an optional `summary` object.
pub fn write_json<T: Serialize, W: Write>(
    mut out: W,
    meta: &Meta,
    rows: &[T],
    summary: Option<&serde_json::Value>,
) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &Document { meta, rows, summary })?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<T: CsvRow + Serialize, W: Write>(
    out: W,
    format: Format,
    meta: &Meta,
    rows: &[T],
    summary: Option<&serde_json::Value>,
) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, meta, rows, summary),
    }
}

pub(crate) fn parse_real(field: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("not a real number: {field:?}")))
}

pub(crate) fn parse_opt(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_real(field).map(Some)
    }
}

pub(crate) fn parse_flag(field: &str) -> Result<bool> {
    match field {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::Parse(format!("not a flag: {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting_round_trips() {
        for v in [1.0 / 3.0, -0.1, 0.0, 5e-324, 0.75] {
            assert_eq!(parse_real(&fmt_real(v)).unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_real(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
