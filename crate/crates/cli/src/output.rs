//! Tabular output as CSV or JSON, written atomically.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::{Format, OutputArgs};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    /// No value, e.g. `f_ν` at a pole.
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, digits: usize) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_significant(*x, digits),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Empty => String::new(),
            }))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| {
                        let v = match c {
                            Cell::Num(x) => Value::from(*x),
                            Cell::Int(i) => Value::from(*i),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Bool(b) => Value::from(*b),
                            Cell::Empty => Value::Null,
                        };
                        ((*h).to_owned(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// `x` with `digits` significant digits: positional notation for decimal
/// exponents in `[-5, digits)`, scientific otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17);
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

/// Where output goes: a file, or stdout when `None`.
pub fn destination(args: &OutputArgs, command: &str) -> Option<PathBuf> {
    match (&args.out, &args.out_dir) {
        (Some(out), Some(dir)) if out.is_relative() => Some(dir.join(out)),
        (Some(out), _) => Some(out.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{command}.{}", args.format.extension()))),
        (None, None) => None,
    }
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn emit(args: &OutputArgs, command: &str, bytes: &[u8]) -> Result<(), CliError> {
    match destination(args, command) {
        Some(path) => write_atomic(&path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

pub fn render(table: &Table, format: Format, digits: usize) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => table.to_csv(digits),
        Format::Json => json_bytes(&table.to_json()),
    }
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(3.831, 17), "3.8310000000000000");
        assert_eq!(format_significant(3.831, 4), "3.831");
        assert_eq!(format_significant(-23620.4, 4), "-2.362e4");
        assert_eq!(format_significant(26.924, 4), "26.92");
        assert_eq!(format_significant(0.983_689_067_388_303_9, 4), "0.9837");
        assert_eq!(format_significant(9.9996, 4), "10.00");
        assert_eq!(format_significant(1.5e-9, 3), "1.50e-9");
        assert_eq!(format_significant(-3803000.0, 4), "-3.803e6");
        assert_eq!(format_significant(0.0, 17), "0");
        let x = 0.1 + 0.2;
        assert_eq!(format_significant(x, 17).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["d", "x", "ok", "note"]);
        t.push(vec![4u32.into(), 0.5.into(), true.into(), Cell::Empty]);
        let s = String::from_utf8(t.to_csv(3).unwrap()).unwrap();
        assert_eq!(s, "d,x,ok,note\n4,0.500,true,\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
