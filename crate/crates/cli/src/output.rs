//! CSV and manifest writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Seventeen significant digits, enough for a lossless round trip.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        // Adding zero turns −0 into +0.
        format!("{:.16e}", x + 0.0)
    }
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// `<out>` with `suffix` appended to the full file name.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

pub struct CsvOut {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvOut {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self, CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        writer.write_record(header)?;
        Ok(Self { path: path.to_path_buf(), writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub parameters: Value,
    pub base_seed: Option<u64>,
    pub threads: usize,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
    /// Derived summaries: peaks, fits, crossovers.
    pub results: Value,
}

pub struct Run {
    subcommand: &'static str,
    parameters: Value,
    base_seed: Option<u64>,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn start<P: Serialize>(subcommand: &'static str, params: &P, base_seed: Option<u64>) -> Self {
        Self {
            subcommand,
            parameters: serde_json::to_value(params).unwrap_or(Value::Null),
            base_seed,
            started: Instant::now(),
            outputs: Vec::new(),
        }
    }

    pub fn output(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    /// Writes `<out>.manifest.json` next to the main CSV.
    pub fn finish(self, out: &Path, results: Value) -> Result<PathBuf, CliError> {
        let path = sibling(out, ".manifest.json");
        let manifest = RunManifest {
            subcommand: self.subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: self.parameters,
            base_seed: self.base_seed,
            threads: rayon::current_num_threads(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            results,
        };
        let mut f = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut f, &manifest)?;
        writeln!(f)?;
        f.flush()?;
        Ok(path)
    }
}
