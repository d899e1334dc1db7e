//! CSV reports that are staged in memory and written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

/// One CSV file: `#` header lines with the run configuration, then a
/// standard CSV table.
pub struct Report {
    file_name: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Report {
    pub fn new(file_name: &str, columns: &[&str]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        writer.write_record(columns)?;
        Ok(Self {
            file_name: file_name.to_string(),
            writer,
        })
    }

    pub fn row(&mut self, record: impl Serialize) -> Result<()> {
        self.writer.serialize(record).context("serializing report row")
    }

    fn into_bytes(self, config: &RunConfig) -> Result<(String, Vec<u8>)> {
        let mut bytes = Vec::new();
        for line in config.header() {
            writeln!(bytes, "# {line}")?;
        }
        bytes.extend(self.writer.into_inner().context("flushing report")?);
        Ok((self.file_name, bytes))
    }
}

/// Writes every report into `dir`. Each file is written to a temporary file
/// in the same directory and renamed into place, so readers never see a
/// partial report.
pub fn commit(dir: &Path, config: &RunConfig, reports: Vec<Report>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::with_capacity(reports.len());
    for report in reports {
        let (name, bytes) = report.into_bytes(config)?;
        let target = dir.join(&name);
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("staging {name}"))?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target)
            .with_context(|| format!("writing {}", target.display()))?;
        log::info!("wrote {}", target.display());
        written.push(target);
    }
    Ok(written)
}

/// Parameters as `name=value` pairs separated by `;`.
pub fn format_params<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> String {
    pairs
        .into_iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}
