//! Report rows and the CSV/JSON writers.
//!
//! Fixed CSV header `command,beta,gamma,delta,method,value,std_error,units,seed`;
//! floats are written with 17 significant digits so parsing reproduces
//! them bit-exactly. JSON mirrors the same fields and formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Clone, Debug)]
pub struct Row {
    pub command: &'static str,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub method: String,
    pub value: f64,
    pub std_error: f64,
    pub units: &'static str,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits: round-trips any f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[Row], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "command,beta,gamma,delta,method,value,std_error,units,seed"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.command,
            fmt(r.beta),
            fmt(r.gamma),
            fmt(r.delta),
            r.method,
            fmt(r.value),
            fmt(r.std_error),
            r.units,
            r.seed
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> std::io::Result<()> {
    writeln!(out, "[")?;
    for (i, r) in rows.iter().enumerate() {
        let comma = if i + 1 == rows.len() { "" } else { "," };
        writeln!(
            out,
            "  {{\"command\":\"{}\",\"beta\":{},\"gamma\":{},\"delta\":{},\"method\":\"{}\",\"value\":{},\"std_error\":{},\"units\":\"{}\",\"seed\":{}}}{comma}",
            r.command,
            fmt(r.beta),
            fmt(r.gamma),
            fmt(r.delta),
            r.method,
            fmt(r.value),
            fmt(r.std_error),
            r.units,
            r.seed
        )?;
    }
    writeln!(out, "]")?;
    Ok(())
}

/// Write rows to `path` (or stdout when absent). Empty row sets are an
/// error and produce no file.
pub fn emit(rows: &[Row], format: Format, path: Option<&Path>) -> Result<(), String> {
    if rows.is_empty() {
        return Err("no rows to emit".into());
    }
    let go = |out: &mut dyn Write| match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            let mut w = BufWriter::new(file);
            go(&mut w).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            go(&mut w).map_err(|e| e.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        Row {
            command: "cf",
            beta: 0.6,
            gamma: 1.25,
            delta: 1.0,
            method: "closed".into(),
            value: -0.123_456_789_012_345_67,
            std_error: 0.0,
            units: "hbar*Omega^4/c^3",
            seed: 42,
        }
    }

    #[test]
    fn csv_header_fixed() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("command,beta,gamma,delta,method,value,std_error,units,seed\n"));
    }

    #[test]
    fn floats_roundtrip_through_text() {
        let r = row();
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let value: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert_eq!(value.to_bits(), r.value.to_bits());
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(emit(&[], Format::Csv, None).is_err());
    }
}
