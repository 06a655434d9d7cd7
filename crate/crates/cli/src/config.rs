use std::fs;
use std::path::{Path, PathBuf};

use journeylab::{Error, PlannerConfig, SyntheticConfig};
use serde::{Deserialize, Serialize};

/// `dataset` field of a sweep config: a manifest path relative to the
/// config file, or an inline synthetic generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetRef {
    Manifest(PathBuf),
    Synthetic {
        synthetic: SyntheticConfig,
        #[serde(default = "default_per_trial")]
        per_trial: bool,
    },
}

fn default_per_trial() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dataset: DatasetRef,
    pub planners: Vec<PlannerConfig>,
    #[serde(default)]
    pub l_prime: Vec<usize>,
    #[serde(default)]
    pub budgets: Vec<usize>,
    pub n_trials: usize,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_length: Option<usize>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Writes `<path>.provenance.json` next to an output file.
pub fn write_provenance(path: &Path, subcommand: &str, resolved: serde_json::Value, master_seed: Option<u64>) -> Result<(), Error> {
    let record = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "resolved_config": resolved,
        "master_seed": master_seed,
        "rng_algorithm": journeylab::rng::RNG_ALGORITHM,
    });
    let mut name = path.as_os_str().to_owned();
    name.push(".provenance.json");
    let side = PathBuf::from(name);
    let mut text = serde_json::to_string_pretty(&record).expect("provenance serializes");
    text.push('\n');
    fs::write(&side, text).map_err(|e| Error::Io { path: side, source: e })
}
