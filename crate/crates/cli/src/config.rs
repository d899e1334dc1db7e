//! The run configuration embedded in every report, and dataset assembly.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use bgt::data::{filter_by_feature, load_dataset, subsample_combine};
use bgt::{Dataset, FeatureFilter, ModelSpec};

use crate::DataArgs;

/// Everything that determines a command's output. Serialized as JSON into
/// each report header, so a report can be regenerated from its own header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub manifests: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsample_per_source: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fold_plan: Option<FoldPlanConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub out: PathBuf,
    /// Command-specific settings (restarts, sample counts, grid bounds, ...).
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub options: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldPlanConfig {
    pub rounds: usize,
    pub folds: usize,
    pub fold_unit: crate::FoldUnitArg,
}

impl RunConfig {
    pub fn new(command: &'static str, out: &Path) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            models: Vec::new(),
            manifests: Vec::new(),
            filter: None,
            subsample_per_source: None,
            fold_plan: None,
            seed: None,
            out: out.to_path_buf(),
            options: serde_json::Map::new(),
        }
    }

    pub fn with_data(mut self, data: &DataArgs) -> Self {
        self.manifests = data.manifests.clone();
        self.filter = data.filter.clone();
        self.subsample_per_source = data.subsample_per_source;
        self.seed = Some(data.seed);
        self
    }

    pub fn option(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).expect("options serialize");
        self.options.insert(key.to_string(), value);
        self
    }

    pub fn header(&self) -> Vec<String> {
        vec![
            format!("bgt {} {}", self.command, self.version),
            format!("config: {}", serde_json::to_string(self).expect("config serializes")),
        ]
    }
}

/// Resolves every model name against the registry before any work starts.
pub fn resolve_models(names: &[String]) -> Result<Vec<(String, ModelSpec)>> {
    names
        .iter()
        .map(|n| {
            let spec = ModelSpec::parse(n.trim()).with_context(|| format!("model `{n}`"))?;
            Ok((n.trim().to_string(), spec))
        })
        .collect()
}

pub fn parse_filter(name: Option<&str>) -> Result<Option<FeatureFilter>> {
    name.map(|n| n.parse::<FeatureFilter>().with_context(|| format!("filter `{n}`")))
        .transpose()
}

/// Loads each manifest separately, one dataset per source.
pub fn load_sources(manifests: &[PathBuf]) -> Result<Vec<Dataset>> {
    manifests
        .iter()
        .map(|p| load_dataset(p).with_context(|| format!("loading {}", p.display())))
        .collect()
}

/// Loads, optionally subsamples, combines and filters the data a command
/// works on.
pub fn assemble_dataset(data: &DataArgs) -> Result<Dataset> {
    let filter = parse_filter(data.filter.as_deref())?;
    let sources = load_sources(&data.manifests)?;
    let combined = match data.subsample_per_source {
        Some(n) => subsample_combine(&sources, n, data.seed, "combined")?,
        None => Dataset::merge(&sources, "combined")?,
    };
    let dataset = match filter {
        Some(f) => filter_by_feature(&[combined], f)?,
        None => combined,
    };
    if dataset.num_games() == 0 {
        bail!("no games left after loading and filtering");
    }
    Ok(dataset)
}
