//! Journey planners.
//!
//! The explore-then-exploit planner first walks every journey `L'` steps in
//! round-robin order (rounds of ascending journey id), then exploits the
//! score table: in `commit` mode it runs the best journey to completion
//! before re-ranking, in `greedy` mode it re-ranks after every image. Two
//! random baselines are provided for comparison.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::journey::JourneyId;
use crate::rng::{self, StreamRng};
use crate::score::ScoreTable;
use crate::simulator::{SimulatorState, StepOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    ExploreExploit,
    RandomJourney,
    RandomStep,
}

impl PlannerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::ExploreExploit => "explore_exploit",
            PlannerKind::RandomJourney => "random_journey",
            PlannerKind::RandomStep => "random_step",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explore_exploit" => Ok(PlannerKind::ExploreExploit),
            "random_journey" => Ok(PlannerKind::RandomJourney),
            "random_step" => Ok(PlannerKind::RandomStep),
            other => Err(Error::Config(format!("unknown planner kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExploitMode {
    #[default]
    Commit,
    Greedy,
}

impl ExploitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExploitMode::Commit => "commit",
            ExploitMode::Greedy => "greedy",
        }
    }
}

impl fmt::Display for ExploitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ExploitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commit" => Ok(ExploitMode::Commit),
            "greedy" => Ok(ExploitMode::Greedy),
            other => Err(Error::Config(format!("unknown exploit mode {other:?}"))),
        }
    }
}

fn default_l_prime() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    pub kind: PlannerKind,
    /// Exploration steps per journey (`L'`), used by `explore_exploit`.
    #[serde(default = "default_l_prime")]
    pub explore_budget_per_journey: usize,
    #[serde(default)]
    pub exploit_mode: ExploitMode,
    /// Seed of the random planners.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub strict_paper_semantics: bool,
}

impl PlannerConfig {
    pub fn explore_exploit(l_prime: usize, mode: ExploitMode) -> Self {
        Self {
            kind: PlannerKind::ExploreExploit,
            explore_budget_per_journey: l_prime,
            exploit_mode: mode,
            seed: 0,
            strict_paper_semantics: false,
        }
    }

    pub fn random(kind: PlannerKind, seed: u64) -> Self {
        Self {
            kind,
            explore_budget_per_journey: default_l_prime(),
            exploit_mode: ExploitMode::Commit,
            seed,
            strict_paper_semantics: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PlannerKind::ExploreExploit && self.explore_budget_per_journey < 1 {
            return Err(Error::Config(
                "explore_budget_per_journey must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Compact `key=value;...` description of the parameters that matter
    /// for this kind.
    pub fn kind_params(&self) -> String {
        match self.kind {
            PlannerKind::ExploreExploit => format!(
                "l_prime={};mode={};strict={}",
                self.explore_budget_per_journey, self.exploit_mode, self.strict_paper_semantics
            ),
            _ => format!("seed={};strict={}", self.seed, self.strict_paper_semantics),
        }
    }
}

impl fmt::Display for PlannerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.kind_params())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Explore,
    Exploit,
}

#[derive(Debug, Clone)]
enum Policy {
    ExploreExploit {
        mode: ExploitMode,
        l_prime: usize,
        quota: usize,
        explored: usize,
        per_journey: Vec<usize>,
        phase: Phase,
        committed: Option<JourneyId>,
    },
    RandomJourney {
        rng: StreamRng,
        committed: Option<JourneyId>,
    },
    RandomStep {
        rng: StreamRng,
    },
}

/// Per-episode planner state.
#[derive(Debug, Clone)]
pub struct Planner {
    n_journeys: usize,
    policy: Policy,
}

impl Planner {
    /// Fresh planner for an episode of `n_journeys` journeys of length
    /// `window_len`. `L'` is clamped to the number of images a journey can
    /// supply.
    pub fn new(cfg: &PlannerConfig, n_journeys: usize, window_len: usize) -> Result<Self> {
        cfg.validate()?;
        if n_journeys < 1 {
            return Err(Error::Config("planner needs at least one journey".into()));
        }
        let policy = match cfg.kind {
            PlannerKind::ExploreExploit => {
                let capacity = if cfg.strict_paper_semantics {
                    window_len.saturating_sub(1)
                } else {
                    window_len
                };
                let l_prime = cfg.explore_budget_per_journey.min(capacity);
                let quota = n_journeys * l_prime;
                Policy::ExploreExploit {
                    mode: cfg.exploit_mode,
                    l_prime,
                    quota,
                    explored: 0,
                    per_journey: vec![0; n_journeys],
                    phase: if quota == 0 { Phase::Exploit } else { Phase::Explore },
                    committed: None,
                }
            }
            PlannerKind::RandomJourney => Policy::RandomJourney {
                rng: rng::stream(cfg.seed),
                committed: None,
            },
            PlannerKind::RandomStep => Policy::RandomStep {
                rng: rng::stream(cfg.seed),
            },
        };
        Ok(Self { n_journeys, policy })
    }

    pub fn phase(&self) -> Phase {
        match &self.policy {
            Policy::ExploreExploit { phase, .. } => *phase,
            _ => Phase::Exploit,
        }
    }

    /// `L'` after clamping; `None` for the random planners.
    pub fn l_prime(&self) -> Option<usize> {
        match &self.policy {
            Policy::ExploreExploit { l_prime, .. } => Some(*l_prime),
            _ => None,
        }
    }

    /// Number of acquisitions the exploration phase lasts.
    pub fn explore_quota(&self) -> usize {
        match &self.policy {
            Policy::ExploreExploit { quota, .. } => *quota,
            _ => 0,
        }
    }

    pub fn committed(&self) -> Option<JourneyId> {
        match &self.policy {
            Policy::ExploreExploit { committed, .. } | Policy::RandomJourney { committed, .. } => {
                *committed
            }
            Policy::RandomStep { .. } => None,
        }
    }

    /// Ranked journey ids for the next step, best first.
    pub fn next_preference(
        &mut self,
        scores: &ScoreTable,
        sim: &SimulatorState,
    ) -> Result<Vec<JourneyId>> {
        if sim.n_journeys() != self.n_journeys || scores.n_journeys() != self.n_journeys {
            return Err(Error::Contract(format!(
                "planner built for {} journeys, episode has {}",
                self.n_journeys,
                sim.n_journeys()
            )));
        }
        if sim.is_terminal() {
            return Err(Error::Contract(
                "next_preference called on a terminal episode".into(),
            ));
        }
        let n = self.n_journeys;
        let open = |id: JourneyId| sim.open_at(id.index());
        match &mut self.policy {
            Policy::ExploreExploit {
                phase: Phase::Explore,
                per_journey,
                ..
            } => {
                let mut ids: Vec<JourneyId> = JourneyId::all(n).collect();
                ids.sort_by_key(|id| (per_journey[id.index()], *id));
                Ok(ids)
            }
            Policy::ExploreExploit {
                mode: ExploitMode::Greedy,
                ..
            } => Ok(scores.ranking()),
            Policy::ExploreExploit { committed, .. } => {
                let keep = committed.filter(|&c| open(c));
                let head = match keep {
                    Some(c) => c,
                    None => {
                        let best = scores
                            .best_by(|idx| open(JourneyId::from_index(idx)))
                            .map(|s| s.journey);
                        best.or_else(|| JourneyId::all(n).find(|&id| open(id)))
                            .expect("non-terminal episode has a selectable journey")
                    }
                };
                *committed = Some(head);
                let mut ids = Vec::with_capacity(n);
                ids.push(head);
                ids.extend(scores.ranking().into_iter().filter(|&id| id != head));
                Ok(ids)
            }
            Policy::RandomJourney { rng, committed } => {
                let head = match committed.filter(|&c| open(c)) {
                    Some(c) => c,
                    None => draw_open(rng, n, open),
                };
                *committed = Some(head);
                Ok(with_head(head, n))
            }
            Policy::RandomStep { rng } => Ok(with_head(draw_open(rng, n, open), n)),
        }
    }

    /// Credits the executed acquisition, which may differ from the first
    /// preference when the simulator fell back.
    pub fn notify_outcome(&mut self, outcome: &StepOutcome<'_>) -> Result<()> {
        let idx = outcome.journey.index();
        if idx >= self.n_journeys {
            return Err(Error::Contract(format!(
                "outcome for journey {} but planner has {} journeys",
                outcome.journey, self.n_journeys
            )));
        }
        match &mut self.policy {
            Policy::ExploreExploit {
                phase,
                explored,
                quota,
                per_journey,
                committed,
                ..
            } => match phase {
                Phase::Explore => {
                    per_journey[idx] += 1;
                    *explored += 1;
                    if *explored >= *quota {
                        *phase = Phase::Exploit;
                    }
                }
                Phase::Exploit => {
                    if committed.is_some() {
                        *committed = Some(outcome.journey);
                    }
                }
            },
            Policy::RandomJourney { committed, .. } => *committed = Some(outcome.journey),
            Policy::RandomStep { .. } => {}
        }
        Ok(())
    }
}

fn draw_open(rng: &mut StreamRng, n: usize, open: impl Fn(JourneyId) -> bool) -> JourneyId {
    let candidates: Vec<JourneyId> = JourneyId::all(n).filter(|&id| open(id)).collect();
    candidates[rng.random_range(0..candidates.len())]
}

fn with_head(head: JourneyId, n: usize) -> Vec<JourneyId> {
    let mut ids = Vec::with_capacity(n);
    ids.push(head);
    ids.extend(JourneyId::all(n).filter(|&id| id != head));
    ids
}
