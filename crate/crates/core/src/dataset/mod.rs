//! Journey datasets: on-disk format, synthetic generation and trial windows.

mod format;
mod manifest;
mod synthetic;
mod trial;

pub use format::{
    decode_embedding, encode_embedding, read_embedding_file, write_embedding_file, MAGIC,
};
pub use manifest::{load_dataset, save_dataset, Manifest, ManifestJourney, MANIFEST_FILE};
pub use synthetic::{generate_synthetic, SyntheticConfig};
pub use trial::{sample_trial, TrialInstance};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::journey::JourneyId;

/// One journey: the map image of its object plus the images acquired
/// while approaching it, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct JourneyRecord {
    pub id: JourneyId,
    pub query: Embedding,
    pub observations: Vec<Embedding>,
    pub source_paths: Option<Vec<String>>,
}

/// A validated set of journeys with ids `1..=N` sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct JourneyDataset {
    records: Vec<JourneyRecord>,
    dim: usize,
}

impl JourneyDataset {
    /// Validates and sorts `records` by id.
    pub fn new(mut records: Vec<JourneyRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::dataset("dataset", "no journeys"));
        }
        records.sort_by_key(|r| r.id);
        let n = records.len();
        for (pos, r) in records.iter().enumerate() {
            let expected = JourneyId::from_index(pos);
            if r.id != expected {
                let reason = if pos > 0 && records[pos - 1].id == r.id {
                    "duplicate journey id".to_string()
                } else {
                    format!("journey ids must be exactly 1..={n}")
                };
                return Err(Error::dataset(format!("journey {}", r.id), reason));
            }
        }
        let dim = records[0].query.dim();
        for r in &records {
            let record = format!("journey {}", r.id);
            if r.observations.is_empty() {
                return Err(Error::dataset(record, "journey has no observations"));
            }
            if let Some(paths) = &r.source_paths {
                if paths.len() != r.observations.len() {
                    return Err(Error::dataset(
                        record,
                        "source path count differs from observation count",
                    ));
                }
            }
            let bad = std::iter::once(&r.query)
                .chain(&r.observations)
                .find(|e| e.dim() != dim);
            if let Some(e) = bad {
                return Err(Error::dataset(
                    record,
                    format!("dimension {} differs from dataset dimension {dim}", e.dim()),
                ));
            }
        }
        Ok(Self { records, dim })
    }

    pub fn records(&self) -> &[JourneyRecord] {
        &self.records
    }

    pub fn record(&self, id: JourneyId) -> Result<&JourneyRecord> {
        Ok(&self.records[id.check(self.records.len())?])
    }

    pub fn n_journeys(&self) -> usize {
        self.records.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of the shortest journey, i.e. the longest window every
    /// journey can supply.
    pub fn min_length(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.observations.len())
            .min()
            .unwrap_or(0)
    }
}
