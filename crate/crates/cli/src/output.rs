//! Deterministic CSV/JSON emission and the artifact manifest.

use crate::config::Format;
use crate::schema::{table, TableSchema};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Format a float with a fixed layout so reruns are byte-identical.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.12e}")
    }
}

pub fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn coords(c: &[i64]) -> String {
    c.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

/// Rows of one schema-backed table.
pub struct Table {
    schema: &'static TableSchema,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str) -> Self {
        Table { schema: table(file), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.schema.columns.len(), "row width for {}", self.schema.file);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn csv(&self) -> String {
        let mut out = self.schema.columns.iter().map(|c| c.0).collect::<Vec<_>>().join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    self.schema.columns.iter().zip(r).map(|((c, _), v)| (c.to_string(), v.clone().into())).collect();
                obj.into()
            })
            .collect();
        rows.into()
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RunStatus {
    Success,
    ContractViolation,
    Failure,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: &'a str,
    status: RunStatus,
    seed: u64,
    violations: &'a [String],
    error: Option<&'a str>,
    timestamp_unix: u64,
    artifacts: &'a [Artifact],
}

/// Single writer for one run's output directory.
pub struct OutputWriter {
    dir: PathBuf,
    formats: Vec<Format>,
    artifacts: Vec<Artifact>,
}

impl OutputWriter {
    pub fn create(dir: &Path, formats: &[Format]) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputWriter { dir: dir.to_path_buf(), formats: formats.to_vec(), artifacts: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        std::fs::write(self.dir.join(name), bytes)?;
        let sha256 = format!("{:x}", Sha256::digest(bytes));
        self.artifacts.retain(|a| a.path != name);
        self.artifacts.push(Artifact { path: name.into(), sha256, bytes: bytes.len() });
        Ok(())
    }

    /// Emit a table in every requested format.
    pub fn write_table(&mut self, t: &Table) -> io::Result<()> {
        if self.formats.contains(&Format::Csv) {
            self.write_bytes(t.schema.file, t.csv().as_bytes())?;
        }
        if self.formats.contains(&Format::Json) {
            let name = t.schema.file.replace(".csv", ".rows.json");
            let text = serde_json::to_string_pretty(&t.json()).map_err(io::Error::other)?;
            self.write_bytes(&name, text.as_bytes())?;
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        self.write_bytes(name, text.as_bytes())
    }

    /// Write `manifest.json` listing every artifact so far.
    pub fn finish(
        &mut self,
        experiment: &str,
        status: RunStatus,
        seed: u64,
        violations: &[String],
        error: Option<&str>,
    ) -> io::Result<PathBuf> {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = Manifest {
            tool: "heatcorr",
            version: env!("CARGO_PKG_VERSION"),
            experiment,
            status,
            seed,
            violations,
            error,
            timestamp_unix,
            artifacts: &self.artifacts,
        };
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?)?;
        Ok(path)
    }
}
