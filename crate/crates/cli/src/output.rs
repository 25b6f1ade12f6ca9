//! Deterministic CSV/JSON emission with atomic writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// Round to `sig` significant digits, then print the shortest string that
/// reads back to the rounded value. Plain notation for magnitudes in
/// `[1e-4, 1e12)`, exponent notation otherwise.
pub fn format_float(v: f64, sig: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", sig.saturating_sub(1), v).parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Rows of already formatted cells under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// All files of one command, written only after everything is computed.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn csv(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        self.files.push((name.to_string(), table.to_csv()?));
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        bytes.push(b'\n');
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.files.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Write each file to a temporary sibling and rename it into place.
    pub fn write_all(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(dir.join(name)).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1 + 0.2, 12), "0.3");
        assert_eq!(format_float(1.0, 12), "1");
        assert_eq!(format_float(-2.5e-7, 12), "-2.5e-7");
        assert_eq!(format_float(0.0110627044173849, 12), "0.0110627044174");
        assert_eq!(format_float(123456.0, 3), "123000");
        assert_eq!(format_float(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_uses_lf() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv().unwrap(), b"a,b\n1,\"x,y\"\n");
    }
}
