use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-based journey identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JourneyId(usize);

impl JourneyId {
    /// Builds an id, checking it against a journey count.
    pub fn new(id: usize, n_journeys: usize) -> Result<Self> {
        if id == 0 || id > n_journeys {
            return Err(Error::Index {
                index: id,
                len: n_journeys,
            });
        }
        Ok(Self(id))
    }

    /// The id of the journey stored at zero-based position `index`.
    pub fn from_index(index: usize) -> Self {
        Self(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    /// All ids `1..=n`.
    pub fn all(n: usize) -> impl DoubleEndedIterator<Item = JourneyId> + ExactSizeIterator {
        (0..n).map(JourneyId::from_index)
    }

    pub(crate) fn check(self, n_journeys: usize) -> Result<usize> {
        if self.0 == 0 || self.0 > n_journeys {
            return Err(Error::Index {
                index: self.0,
                len: n_journeys,
            });
        }
        Ok(self.0 - 1)
    }
}

impl fmt::Display for JourneyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
