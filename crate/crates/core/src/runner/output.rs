//! Reports, manifests and the atomic file writer.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Shortest decimal that parses back to the same `f64`; never localized.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:?}")
    }
}

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("tables always serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Warning,
    Aborted,
}

/// Named results of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub status: Status,
    pub scalars: BTreeMap<String, f64>,
    /// Kept in insertion order; the first series is the primary output.
    #[serde(skip)]
    pub series: Vec<(String, Table)>,
    /// Structured JSON side outputs.
    #[serde(skip)]
    pub documents: Vec<(String, Value)>,
    pub diagnostics: Vec<String>,
}

impl Default for RunReport {
    fn default() -> Self {
        RunReport::new()
    }
}

impl RunReport {
    pub fn new() -> Self {
        RunReport {
            status: Status::Ok,
            scalars: BTreeMap::new(),
            series: vec![],
            documents: vec![],
            diagnostics: vec![],
        }
    }

    pub fn aborted(message: impl Into<String>) -> Self {
        let mut r = RunReport::new();
        r.status = Status::Aborted;
        r.diagnostics.push(message.into());
        r
    }

    pub fn scalar(&mut self, name: &str, value: f64) {
        let fresh = self.scalars.insert(name.to_string(), value).is_none();
        assert!(fresh, "duplicate scalar {name}");
    }

    pub fn add_series(&mut self, name: &str, table: Table) {
        assert!(self.series.iter().all(|(n, _)| n != name), "duplicate series {name}");
        self.series.push((name.to_string(), table));
    }

    pub fn series(&self, name: &str) -> Option<&Table> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn add_document(&mut self, name: &str, doc: Value) {
        assert!(self.documents.iter().all(|(n, _)| n != name), "duplicate document {name}");
        self.documents.push((name.to_string(), doc));
    }

    /// Records a warning; an aborted status is never downgraded.
    pub fn warn(&mut self, message: impl Into<String>) {
        if self.status == Status::Ok {
            self.status = Status::Warning;
        }
        self.diagnostics.push(message.into());
    }

    pub fn to_json(&self) -> String {
        let series: Vec<&str> = self.series.iter().map(|(n, _)| n.as_str()).collect();
        let value = serde_json::json!({
            "status": self.status,
            "scalars": self.scalars,
            "series": series,
            "diagnostics": self.diagnostics,
        });
        let mut s = serde_json::to_string_pretty(&value).expect("reports always serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub wall_time: f64,
    /// The resolved configuration, every default filled in.
    pub config: Value,
}

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 over the canonical JSON of (subcommand, config, seed, version).
/// `serde_json` maps keep keys sorted, so equal inputs give equal hashes.
pub fn config_hash(subcommand: &str, config: &Value, seed: Option<u64>) -> String {
    let canonical = serde_json::json!({
        "subcommand": subcommand,
        "config": config,
        "seed": seed,
        "tool_version": TOOL_VERSION,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name =
        path.file_name().ok_or_else(|| Error::config(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn render(self, table: &Table) -> String {
        match self {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        }
    }
}

/// Where a run's files go: a directory, or a single file for the primary
/// series with the remaining files placed beside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutTarget {
    Dir(PathBuf),
    File(PathBuf),
}

impl OutTarget {
    pub fn parse(path: PathBuf) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") | Some("json") => OutTarget::File(path),
            _ => OutTarget::Dir(path),
        }
    }

    pub fn join(&self, sub: &str) -> OutTarget {
        match self {
            OutTarget::Dir(d) => OutTarget::Dir(d.join(sub)),
            OutTarget::File(f) => {
                let dir = f.parent().unwrap_or(Path::new("")).join(sub);
                OutTarget::File(dir.join(f.file_name().unwrap_or_default()))
            }
        }
    }

    fn sibling(&self, name: &str) -> PathBuf {
        match self {
            OutTarget::Dir(d) => d.join(name),
            OutTarget::File(f) => {
                let stem = f.file_stem().unwrap_or_default().to_string_lossy();
                f.with_file_name(format!("{stem}.{name}"))
            }
        }
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.sibling("manifest.json")
    }
}

/// Writes the report, its series and documents; returns the paths written.
pub fn emit(report: &RunReport, target: &OutTarget, format: Format) -> Result<Vec<PathBuf>> {
    let mut written = vec![];
    for (i, (name, table)) in report.series.iter().enumerate() {
        let (path, fmt) = match target {
            OutTarget::File(f) if i == 0 => {
                let fmt =
                    if f.extension().and_then(|e| e.to_str()) == Some("json") { Format::Json } else { Format::Csv };
                (f.clone(), fmt)
            }
            _ => (target.sibling(&format!("{name}.{}", format.extension())), format),
        };
        write_atomic(&path, fmt.render(table).as_bytes())?;
        written.push(path);
    }
    for (name, doc) in &report.documents {
        let path = target.sibling(&format!("{name}.json"));
        let mut s = serde_json::to_string_pretty(doc)?;
        s.push('\n');
        write_atomic(&path, s.as_bytes())?;
        written.push(path);
    }
    let path = target.sibling("report.json");
    write_atomic(&path, report.to_json().as_bytes())?;
    written.push(path);
    Ok(written)
}
