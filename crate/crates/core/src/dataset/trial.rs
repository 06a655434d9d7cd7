use rand::Rng;

use super::JourneyDataset;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::journey::JourneyId;
use crate::rng;

/// One evaluation sample: a length-`L` contiguous window of every journey
/// and a ground-truth target whose map image is the query.
///
/// Windows borrow from the dataset, so a trial is cheap to build.
#[derive(Debug, Clone)]
pub struct TrialInstance<'a> {
    windows: Vec<&'a [Embedding]>,
    offsets: Vec<usize>,
    target: JourneyId,
    query: &'a Embedding,
}

impl<'a> TrialInstance<'a> {
    /// Builds a trial from explicit window offsets.
    pub fn from_offsets(
        dataset: &'a JourneyDataset,
        window_len: usize,
        offsets: Vec<usize>,
        target: JourneyId,
    ) -> Result<Self> {
        if window_len < 1 {
            return Err(Error::Config("window length must be at least 1".into()));
        }
        if offsets.len() != dataset.n_journeys() {
            return Err(Error::Dimension {
                expected: dataset.n_journeys(),
                actual: offsets.len(),
            });
        }
        let target_record = dataset.record(target)?;
        let mut windows = Vec::with_capacity(offsets.len());
        for (r, &off) in dataset.records().iter().zip(&offsets) {
            let end = off + window_len;
            if end > r.observations.len() {
                return Err(Error::dataset(
                    format!("journey {}", r.id),
                    format!(
                        "window [{off}, {end}) exceeds journey length {}",
                        r.observations.len()
                    ),
                ));
            }
            windows.push(&r.observations[off..end]);
        }
        Ok(Self {
            windows,
            offsets,
            target,
            query: &target_record.query,
        })
    }

    pub fn n_journeys(&self) -> usize {
        self.windows.len()
    }

    pub fn window_len(&self) -> usize {
        self.windows[0].len()
    }

    pub fn window(&self, journey: JourneyId) -> Result<&'a [Embedding]> {
        Ok(self.windows[journey.check(self.windows.len())?])
    }

    pub fn windows(&self) -> &[&'a [Embedding]] {
        &self.windows
    }

    /// Start of each window within its source journey (zero-based).
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn target(&self) -> JourneyId {
        self.target
    }

    pub fn query(&self) -> &'a Embedding {
        self.query
    }
}

/// Draws a uniform window start for each journey (in id order), then a
/// uniform target.
pub fn sample_trial(
    dataset: &JourneyDataset,
    window_len: usize,
    seed: u64,
) -> Result<TrialInstance<'_>> {
    if window_len < 1 {
        return Err(Error::Config("window length must be at least 1".into()));
    }
    if let Some(r) = dataset
        .records()
        .iter()
        .find(|r| r.observations.len() < window_len)
    {
        return Err(Error::dataset(
            format!("journey {}", r.id),
            format!(
                "journey has {} observations, shorter than window length {window_len}",
                r.observations.len()
            ),
        ));
    }
    let mut rng = rng::stream(seed);
    let offsets = dataset
        .records()
        .iter()
        .map(|r| rng.random_range(0..=r.observations.len() - window_len))
        .collect();
    let target = JourneyId::from_index(rng.random_range(0..dataset.n_journeys()));
    TrialInstance::from_offsets(dataset, window_len, offsets, target)
}
