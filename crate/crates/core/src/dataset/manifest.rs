use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::format::{read_embedding_file, write_embedding_file};
use super::{JourneyDataset, JourneyRecord};
use crate::error::{Error, Result};
use crate::journey::JourneyId;

pub const MANIFEST_FILE: &str = "dataset.json";
const MANIFEST_VERSION: u32 = 1;

/// `dataset.json`; embedding paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub dim: usize,
    pub journeys: Vec<ManifestJourney>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestJourney {
    pub id: usize,
    pub query: String,
    pub observations: Vec<String>,
}

pub fn load_dataset(manifest_path: impl AsRef<Path>) -> Result<JourneyDataset> {
    let manifest_path = manifest_path.as_ref();
    let text = fs::read_to_string(manifest_path).map_err(|err| {
        Error::dataset(
            manifest_path.display().to_string(),
            format!("cannot read manifest: {err}"),
        )
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|err| {
        Error::dataset(
            manifest_path.display().to_string(),
            format!("malformed manifest: {err}"),
        )
    })?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::dataset(
            manifest_path.display().to_string(),
            format!("unsupported manifest version {}", manifest.version),
        ));
    }
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let n = manifest.journeys.len();
    let mut records = Vec::with_capacity(n);
    for j in &manifest.journeys {
        let record = format!("journey {}", j.id);
        let id = JourneyId::new(j.id, n)
            .map_err(|_| Error::dataset(&record, format!("id must lie in 1..={n}")))?;
        let load = |rel: &String| {
            read_embedding_file(base.join(rel))
                .map_err(|err| Error::dataset(&record, format!("{rel}: {err}")))
        };
        let query = load(&j.query)?;
        let observations = j.observations.iter().map(load).collect::<Result<Vec<_>>>()?;
        records.push(JourneyRecord {
            id,
            query,
            observations,
            source_paths: Some(j.observations.clone()),
        });
    }
    let dataset = JourneyDataset::new(records)?;
    if dataset.dim() != manifest.dim {
        return Err(Error::dataset(
            manifest_path.display().to_string(),
            format!(
                "manifest declares dim {} but embeddings have dim {}",
                manifest.dim,
                dataset.dim()
            ),
        ));
    }
    Ok(dataset)
}

/// Writes every embedding under `directory` as `jNNN/query.emb` and
/// `jNNN/obs_NNNNN.emb`, then the manifest; returns the manifest path.
pub fn save_dataset(dataset: &JourneyDataset, directory: impl AsRef<Path>) -> Result<PathBuf> {
    let directory = directory.as_ref();
    let mut journeys = Vec::with_capacity(dataset.n_journeys());
    for r in dataset.records() {
        let sub = format!("j{:03}", r.id.get());
        let dir = directory.join(&sub);
        fs::create_dir_all(&dir).map_err(|err| Error::io(&dir, err))?;
        let query = format!("{sub}/query.emb");
        write_embedding_file(&r.query, directory.join(&query))?;
        let mut observations = Vec::with_capacity(r.observations.len());
        for (j, obs) in r.observations.iter().enumerate() {
            let rel = format!("{sub}/obs_{:05}.emb", j + 1);
            write_embedding_file(obs, directory.join(&rel))?;
            observations.push(rel);
        }
        journeys.push(ManifestJourney {
            id: r.id.get(),
            query,
            observations,
        });
    }
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        dim: dataset.dim(),
        journeys,
    };
    let path = directory.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|err| Error::io(&path, err))?;
    Ok(path)
}
