use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub input_path: String,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, String>,
    pub versions: String,
    pub outputs: Vec<String>,
    pub created_unix: u64,
}

/// Collects output files for a command and writes its manifest last.
pub struct OutputDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutputDir {
    pub fn new(dir: &Path, command: &str, input: Option<&Path>) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                schema_version: SCHEMA_VERSION,
                command: command.to_string(),
                input_path: input.map(|p| p.display().to_string()).unwrap_or_default(),
                seed: None,
                parameters: BTreeMap::new(),
                versions: format!("netextremes {}", env!("CARGO_PKG_VERSION")),
                outputs: Vec::new(),
                created_unix: 0,
            },
        })
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.parameters.insert(key.to_string(), value.to_string());
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.manifest.outputs.push(p.display().to_string());
        p
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let p = self.path(name);
        let mut w = BufWriter::new(File::create(&p)?);
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(p)
    }

    /// Headered CSV from serializable rows; the header is written even when
    /// `rows` is empty.
    pub fn csv<T: Serialize>(&mut self, name: &str, header: &[&str], rows: &[T]) -> Result<PathBuf> {
        let p = self.path(name);
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&p)?;
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(p)
    }

    pub fn lines<I, D>(&mut self, name: &str, values: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = D>,
        D: std::fmt::Display,
    {
        let p = self.path(name);
        let mut w = BufWriter::new(File::create(&p)?);
        for v in values {
            writeln!(w, "{v}")?;
        }
        w.flush()?;
        Ok(p)
    }

    /// Writes `<command>.manifest.json` and returns every output path.
    pub fn finish(mut self) -> Result<Vec<String>> {
        self.manifest.created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let name = format!("{}.manifest.json", self.manifest.command);
        let p = self.dir.join(&name);
        self.manifest.outputs.push(p.display().to_string());
        let mut w = BufWriter::new(File::create(&p)?);
        serde_json::to_writer_pretty(&mut w, &self.manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(self.manifest.outputs)
    }
}
