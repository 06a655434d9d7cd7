use std::fmt;

use serde::{Deserialize, Serialize};

use super::{run_episode, AccuracyCurve};
use crate::dataset::{generate_synthetic, sample_trial, JourneyDataset, SyntheticConfig};
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::planner::{PlannerConfig, PlannerKind};
use crate::rng::{self, RNG_ALGORITHM};

/// Where the trials of a sweep come from.
#[derive(Debug, Clone)]
pub enum TrialSource<'a> {
    /// Random windows of a fixed dataset.
    Dataset(&'a JourneyDataset),
    /// A fresh synthetic dataset per trial, seeded from the config seed and
    /// the trial seed.
    Synthetic(SyntheticConfig),
}

impl TrialSource<'_> {
    fn shape(&self) -> (usize, usize) {
        match self {
            TrialSource::Dataset(ds) => (ds.n_journeys(), ds.min_length()),
            TrialSource::Synthetic(cfg) => (cfg.n_journeys, cfg.length),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TrialSource::Dataset(_) => Ok(()),
            TrialSource::Synthetic(cfg) => cfg.validate(),
        }
    }
}

impl fmt::Display for TrialSource<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialSource::Dataset(ds) => write!(
                f,
                "dataset(n_journeys={}, min_length={}, dim={})",
                ds.n_journeys(),
                ds.min_length(),
                ds.dim()
            ),
            TrialSource::Synthetic(cfg) => write!(
                f,
                "synthetic_per_trial({})",
                serde_json::to_string(cfg).expect("config serializes")
            ),
        }
    }
}

/// What to run: the planner configurations, the `L'` values to expand
/// `explore_exploit` planners over, and the budget grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub planners: Vec<PlannerConfig>,
    /// Replaces `explore_budget_per_journey` of every `explore_exploit`
    /// planner; empty keeps each planner's own value.
    pub l_primes: Vec<usize>,
    /// Times at which accuracy is reported. Episodes run with the largest
    /// value as budget; empty means every `t` up to `N * L`.
    pub budgets: Vec<usize>,
    pub n_trials: usize,
    pub master_seed: u64,
    /// Window length `L`; defaults to the shortest journey.
    pub window_length: Option<usize>,
}

impl SweepSpec {
    /// The expanded configuration list, in report order.
    pub fn configurations(&self) -> Vec<PlannerConfig> {
        let mut out: Vec<PlannerConfig> = Vec::new();
        for p in &self.planners {
            if p.kind == PlannerKind::ExploreExploit && !self.l_primes.is_empty() {
                for &l in &self.l_primes {
                    out.push(PlannerConfig {
                        explore_budget_per_journey: l,
                        ..p.clone()
                    });
                }
            } else {
                out.push(p.clone());
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|c| seen.insert(c.clone()));
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `0` uses every available core and `1` runs inline.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationCurve {
    pub planner: PlannerConfig,
    pub curve: AccuracyCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub dataset: String,
    pub master_seed: u64,
    pub rng_algorithm: String,
    pub n_trials: usize,
    pub window_length: usize,
    pub budget: usize,
    pub trial_seeds: Vec<u64>,
    pub configurations: Vec<ConfigurationCurve>,
}

/// Per-trial success indicators of every configuration at every grid time.
#[derive(Debug, Clone)]
pub struct PairedRun {
    pub dataset: String,
    pub configurations: Vec<PlannerConfig>,
    pub times: Vec<usize>,
    pub window_length: usize,
    pub budget: usize,
    pub master_seed: u64,
    pub trial_seeds: Vec<u64>,
    /// `success[trial][configuration][time]`.
    pub success: Vec<Vec<Vec<bool>>>,
}

impl PairedRun {
    pub fn curve(&self, config: usize) -> AccuracyCurve {
        let counts: Vec<usize> = (0..self.times.len())
            .map(|k| self.success.iter().filter(|s| s[config][k]).count())
            .collect();
        AccuracyCurve::from_counts(&self.times, &counts, self.success.len())
    }

    pub fn time_index(&self, t: usize) -> Option<usize> {
        self.times.iter().position(|&x| x == t)
    }

    pub fn report(&self) -> SweepReport {
        SweepReport {
            dataset: self.dataset.clone(),
            master_seed: self.master_seed,
            rng_algorithm: RNG_ALGORITHM.to_string(),
            n_trials: self.success.len(),
            window_length: self.window_length,
            budget: self.budget,
            trial_seeds: self.trial_seeds.clone(),
            configurations: self
                .configurations
                .iter()
                .enumerate()
                .map(|(i, planner)| ConfigurationCurve {
                    planner: planner.clone(),
                    curve: self.curve(i),
                })
                .collect(),
        }
    }
}

/// Seed of the random planner of configuration `cfg` in the trial seeded
/// with `trial_seed`.
pub fn planner_seed(cfg: &PlannerConfig, trial_seed: u64) -> u64 {
    rng::derive_seed(cfg.seed, trial_seed)
}

/// Runs every configuration on the same sequence of trials.
pub fn run_paired(source: &TrialSource<'_>, spec: &SweepSpec, options: &RunOptions) -> Result<PairedRun> {
    if spec.n_trials < 1 {
        return Err(Error::Config("n_trials must be at least 1".into()));
    }
    source.validate()?;
    let configurations = spec.configurations();
    if configurations.is_empty() {
        return Err(Error::Config("sweep has no planner configurations".into()));
    }
    for c in &configurations {
        c.validate().map_err(|e| e.context(format!("configuration {c}")))?;
    }
    let (n, min_len) = source.shape();
    let window_length = spec.window_length.unwrap_or(min_len);
    if window_length < 1 {
        return Err(Error::Config("window length must be at least 1".into()));
    }
    let mut times = spec.budgets.clone();
    times.sort_unstable();
    times.dedup();
    if times.first() == Some(&0) {
        return Err(Error::Config("budgets must be positive".into()));
    }
    if times.is_empty() {
        times = (1..=n * window_length).collect();
    }
    let budget = *times.last().expect("non-empty grid");
    let trial_seeds = rng::trial_seeds(spec.master_seed, spec.n_trials);

    let success = map_indexed(spec.n_trials, options.workers, |i| {
        let trial_seed = trial_seeds[i];
        let at_trial = |e: Error| e.context(format!("trial {i}"));
        let generated;
        let dataset = match source {
            TrialSource::Dataset(ds) => *ds,
            TrialSource::Synthetic(cfg) => {
                let cfg = SyntheticConfig {
                    seed: rng::derive_seed(cfg.seed, trial_seed),
                    ..cfg.clone()
                };
                generated = generate_synthetic(&cfg).map_err(at_trial)?;
                &generated
            }
        };
        let trial = sample_trial(dataset, window_length, trial_seed).map_err(at_trial)?;
        configurations
            .iter()
            .map(|cfg| {
                let cfg = PlannerConfig {
                    seed: planner_seed(cfg, trial_seed),
                    ..cfg.clone()
                };
                let mut at_grid = vec![false; times.len()];
                let mut k = 0;
                let mut last = false;
                run_episode(&trial, &cfg, budget, |r| {
                    while k < times.len() && times[k] < r.t {
                        at_grid[k] = last;
                        k += 1;
                    }
                    if k < times.len() && times[k] == r.t {
                        at_grid[k] = r.success;
                        k += 1;
                    }
                    last = r.success;
                })
                .map_err(|e| e.context(format!("configuration {cfg}, trial {i}")))?;
                at_grid[k..].iter_mut().for_each(|s| *s = last);
                Ok(at_grid)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(PairedRun {
        dataset: source.to_string(),
        configurations,
        times,
        window_length,
        budget,
        master_seed: spec.master_seed,
        trial_seeds,
        success,
    })
}

pub fn run_sweep(source: &TrialSource<'_>, spec: &SweepSpec, options: &RunOptions) -> Result<SweepReport> {
    Ok(run_paired(source, spec, options)?.report())
}
