//! Artifact writing: every file goes through a temp file and a rename.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use monopole_lab::audit::Verdict;

use crate::config::{Format, SCHEMA_VERSION};

/// Numeric series with named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip text, switching to exponent form for very small or large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let a = v.abs();
    if (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn csv_bytes(t: &Table) -> std::io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row.iter().map(|&v| fmt_f64(v)))?;
    }
    w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))
}

fn gnuplot_bytes(t: &Table) -> Vec<u8> {
    let mut s = format!("# {}\n", t.columns.join(" "));
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s.into_bytes()
}

fn json_table(t: &Table) -> Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "columns": t.columns,
        "rows": t.rows,
    })
}

/// Verdict report written next to every run's data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub tag: String,
    pub verdict: Option<Verdict>,
    pub inputs: Value,
    pub measured: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub counterexamples: Vec<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    pub exit_code: i32,
    pub error: Option<String>,
}

pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<String>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn atomic(&mut self, name: &str, bytes: &[u8]) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.dir.join(name)).map_err(|e| e.error)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn table(&mut self, stem: &str, table: &Table, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let b = csv_bytes(table)?;
                self.atomic(&format!("{stem}.csv"), &b)
            }
            Format::Gnuplot => self.atomic(&format!("{stem}.dat"), &gnuplot_bytes(table)),
            Format::Json => self.json(&format!("{stem}.json"), &json_table(table)),
        }
    }

    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| std::io::Error::other(e.to_string()))?;
        text.push('\n');
        self.atomic(name, text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting_round_trips() {
        for v in [0.0, 1.0, -2.5, 1e-6, 123456.789, 1e20, 3.3e-300] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(1e-6), "1e-6");
        assert_eq!(fmt_f64(0.5), "0.5");
    }

    #[test]
    fn gnuplot_header_is_commented() {
        let mut t = Table::new(&["r", "a"]);
        t.push(vec![1.0, 2.0]);
        assert_eq!(String::from_utf8(gnuplot_bytes(&t)).unwrap(), "# r a\n1 2\n");
    }

    #[test]
    fn csv_has_header() {
        let mut t = Table::new(&["r", "a"]);
        t.push(vec![0.5, 1e-6]);
        assert_eq!(String::from_utf8(csv_bytes(&t).unwrap()).unwrap(), "r,a\n0.5,1e-6\n");
    }

    #[test]
    fn writes_are_atomic_and_recorded() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::new(dir.path()).unwrap();
        w.json("x.json", &serde_json::json!({"a": 1})).unwrap();
        assert_eq!(w.written(), ["x.json"]);
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1, "temp file left behind: {names:?}");
    }
}
