//! Synthetic journeys with a closed-form similarity structure.
//!
//! Journey `n` has a unit prototype `o_n`; all journeys share a unit
//! background `b`. Observation `j` of journey `n` is
//! `normalize(alpha(j) * o_n + c * b + sigma * eps / sqrt(d))` where `alpha`
//! ramps linearly from `alpha_far` at `j = 1` to `alpha_near` at `j = L` and
//! `eps` is standard normal. The query of journey `n` is
//! `normalize(o_n + sigma_q * eps' / sqrt(d))`.
//!
//! With orthogonal prototypes and no noise, `cos(query_n, obs_n(j))` is
//! exactly `alpha(j) / sqrt(alpha(j)^2 + c^2)`.
//!
//! Draw order from the seeded stream: the `N` prototypes, the background,
//! then for each journey its `L` observation noises followed by its query
//! noise.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{JourneyDataset, JourneyRecord};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::journey::JourneyId;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticConfig {
    pub n_journeys: usize,
    pub length: usize,
    pub dim: usize,
    pub alpha_far: f64,
    pub alpha_near: f64,
    pub confusability: f64,
    pub noise: f64,
    pub query_noise: f64,
    pub orthogonal_prototypes: bool,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_journeys < 1 || self.length < 1 || self.dim < 1 {
            return Err(Error::Config(
                "n_journeys, length and dim must all be at least 1".into(),
            ));
        }
        let reals = [
            ("alpha_far", self.alpha_far),
            ("alpha_near", self.alpha_near),
            ("confusability", self.confusability),
            ("noise", self.noise),
            ("query_noise", self.query_noise),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.orthogonal_prototypes && self.dim < self.n_journeys + 1 {
            return Err(Error::Config(format!(
                "orthogonal_prototypes needs dim >= n_journeys + 1 ({}), got {}",
                self.n_journeys + 1,
                self.dim
            )));
        }
        Ok(())
    }

    /// Resolution weight of observation `j` (one-based).
    pub fn alpha(&self, j: usize) -> f64 {
        if self.length == 1 {
            return self.alpha_far;
        }
        let frac = (j - 1) as f64 / (self.length - 1) as f64;
        self.alpha_far + (self.alpha_near - self.alpha_far) * frac
    }
}

pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<JourneyDataset> {
    cfg.validate()?;
    let d = cfg.dim;
    let mut rng = rng::stream(cfg.seed);
    let gaussian = |rng: &mut rng::StreamRng| -> Vec<f64> {
        (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    };

    let mut basis: Vec<Vec<f64>> = (0..=cfg.n_journeys).map(|_| gaussian(&mut rng)).collect();
    if cfg.orthogonal_prototypes {
        gram_schmidt(&mut basis)?;
    } else {
        for v in &mut basis {
            normalize(v).ok_or_else(|| Error::Config("zero prototype draw".into()))?;
        }
    }
    let background = basis.pop().expect("background vector");
    let noise_scale = 1.0 / (d as f64).sqrt();

    let mut records = Vec::with_capacity(cfg.n_journeys);
    for (idx, proto) in basis.iter().enumerate() {
        let id = JourneyId::from_index(idx);
        let mut observations = Vec::with_capacity(cfg.length);
        for j in 1..=cfg.length {
            let alpha = cfg.alpha(j);
            let eps = gaussian(&mut rng);
            let v: Vec<f64> = (0..d)
                .map(|k| {
                    alpha * proto[k]
                        + cfg.confusability * background[k]
                        + cfg.noise * noise_scale * eps[k]
                })
                .collect();
            observations.push(to_unit_embedding(v, id, Some(j))?);
        }
        let eps = gaussian(&mut rng);
        let q: Vec<f64> = (0..d)
            .map(|k| proto[k] + cfg.query_noise * noise_scale * eps[k])
            .collect();
        records.push(JourneyRecord {
            id,
            query: to_unit_embedding(q, id, None)?,
            observations,
            source_paths: None,
        });
    }
    JourneyDataset::new(records)
}

fn to_unit_embedding(mut v: Vec<f64>, id: JourneyId, j: Option<usize>) -> Result<Embedding> {
    if normalize(&mut v).is_none() {
        let what = j.map_or("query".to_string(), |j| format!("observation {j}"));
        return Err(Error::Config(format!(
            "journey {id} {what} has zero norm; raise alpha, confusability or noise"
        )));
    }
    Embedding::new(v.into_iter().map(|x| x as f32).collect())
}

fn normalize(v: &mut [f64]) -> Option<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(())
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
fn gram_schmidt(vectors: &mut [Vec<f64>]) -> Result<()> {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let v = &mut rest[0];
        for _ in 0..2 {
            for u in done.iter() {
                let proj: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return Err(Error::Config(
                "prototype draws are linearly dependent; change the seed".into(),
            ));
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Ok(())
}
