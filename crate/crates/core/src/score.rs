//! Running-max similarity per journey and the argmax selection rule.

use std::cmp::Ordering;

use crate::embedding::{cosine, Embedding};
use crate::error::{Error, Result};
use crate::journey::JourneyId;

/// Per-journey best similarity to the query seen so far.
///
/// A journey with no observations has no score (`None`), which ranks below
/// every real score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    scores: Vec<Option<f64>>,
    observed: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JourneySelection {
    pub journey: JourneyId,
    pub score: f64,
}

impl ScoreTable {
    pub fn new(n_journeys: usize) -> Self {
        Self {
            scores: vec![None; n_journeys],
            observed: vec![0; n_journeys],
        }
    }

    pub fn n_journeys(&self) -> usize {
        self.scores.len()
    }

    pub fn score(&self, journey: JourneyId) -> Result<Option<f64>> {
        Ok(self.scores[journey.check(self.n_journeys())?])
    }

    pub fn observed_count(&self, journey: JourneyId) -> Result<u32> {
        Ok(self.observed[journey.check(self.n_journeys())?])
    }

    pub fn scores(&self) -> &[Option<f64>] {
        &self.scores
    }

    pub fn observed_counts(&self) -> &[u32] {
        &self.observed
    }

    /// Folds one new observation of `journey` into its running max and
    /// returns the cosine that was computed.
    pub fn update(
        &mut self,
        journey: JourneyId,
        query: &Embedding,
        observation: &Embedding,
    ) -> Result<f64> {
        let idx = journey.check(self.n_journeys())?;
        let sim = cosine(query, observation)?;
        self.record(idx, sim);
        Ok(sim)
    }

    /// Folds an already computed similarity into journey `idx` (zero-based).
    pub(crate) fn record(&mut self, idx: usize, sim: f64) {
        let slot = &mut self.scores[idx];
        *slot = Some(match *slot {
            Some(prev) if prev >= sim => prev,
            _ => sim,
        });
        self.observed[idx] += 1;
    }

    /// Highest-scoring journey among those with `selectable[n]` set.
    ///
    /// Ties go to the lowest id. Unscored journeys never win, so a mask that
    /// only admits unscored journeys yields `None`.
    pub fn best_journey(&self, selectable: &[bool]) -> Result<Option<JourneySelection>> {
        if selectable.len() != self.n_journeys() {
            return Err(Error::Dimension {
                expected: self.n_journeys(),
                actual: selectable.len(),
            });
        }
        Ok(self.best_by(|idx| selectable[idx]))
    }

    /// Highest-scoring journey over all journeys, regardless of completion.
    pub fn best_overall(&self) -> Option<JourneySelection> {
        self.best_by(|_| true)
    }

    pub(crate) fn best_by(&self, mut admit: impl FnMut(usize) -> bool) -> Option<JourneySelection> {
        let mut best: Option<JourneySelection> = None;
        for (idx, score) in self.scores.iter().enumerate() {
            let Some(score) = *score else { continue };
            if !admit(idx) {
                continue;
            }
            if best.is_none_or(|b| score > b.score) {
                best = Some(JourneySelection {
                    journey: JourneyId::from_index(idx),
                    score,
                });
            }
        }
        best
    }

    /// All journey ids sorted by descending score; unscored journeys last,
    /// ties by ascending id.
    pub fn ranking(&self) -> Vec<JourneyId> {
        let mut ids: Vec<JourneyId> = JourneyId::all(self.n_journeys()).collect();
        ids.sort_by(|a, b| self.compare(*a, *b));
        ids
    }

    /// Ordering used by [`ScoreTable::ranking`]: `Less` means `a` ranks first.
    pub(crate) fn compare(&self, a: JourneyId, b: JourneyId) -> Ordering {
        let (sa, sb) = (self.scores[a.index()], self.scores[b.index()]);
        let by_score = match (sa, sb) {
            (Some(x), Some(y)) => y.partial_cmp(&x).unwrap_or(Ordering::Equal),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_score.then(a.cmp(&b))
    }
}
