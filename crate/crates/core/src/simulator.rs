//! Journey simulator.
//!
//! The state holds, per journey, the one-based index of its first unseen
//! image. A "one step forward" request on journey `n` returns that image and
//! advances the index by one; every returned image costs one budget unit.
//! Requests carry a ranked preference list and the first journey that can
//! still move is executed.

use std::fmt::Write as _;

use crate::dataset::TrialInstance;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::journey::JourneyId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulatorState {
    next: Vec<usize>,
    t: usize,
    budget: usize,
    window_len: usize,
    strict: bool,
    open: usize,
}

impl SimulatorState {
    /// Fresh state `(1, ..., 1)` at `t = 0`.
    ///
    /// With `strict` set, a journey stops being selectable once its index
    /// reaches `L`, so only `L - 1` images of each journey are reachable.
    pub fn new(n_journeys: usize, window_len: usize, budget: usize, strict: bool) -> Result<Self> {
        if budget < 1 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        if n_journeys < 1 || window_len < 1 {
            return Err(Error::Config(
                "episode needs at least one journey of length at least 1".into(),
            ));
        }
        let mut state = Self {
            next: vec![1; n_journeys],
            t: 0,
            budget,
            window_len,
            strict,
            open: 0,
        };
        state.open = (0..n_journeys).filter(|&i| state.open_at(i)).count();
        Ok(state)
    }

    pub(crate) fn open_at(&self, idx: usize) -> bool {
        if self.strict {
            self.next[idx] < self.window_len
        } else {
            self.next[idx] <= self.window_len
        }
    }

    pub fn selectable(&self, journey: JourneyId) -> Result<bool> {
        Ok(self.open_at(journey.check(self.next.len())?))
    }

    pub fn selectable_mask(&self) -> Vec<bool> {
        (0..self.next.len()).map(|i| self.open_at(i)).collect()
    }

    pub fn any_selectable(&self) -> bool {
        self.open > 0
    }

    pub fn is_terminal(&self) -> bool {
        self.t >= self.budget || self.open == 0
    }

    /// One-based index of the next image journey `journey` would return.
    pub fn next_index(&self, journey: JourneyId) -> Result<usize> {
        Ok(self.next[journey.check(self.next.len())?])
    }

    /// Per-journey next-image indices (the state vector).
    pub fn positions(&self) -> &[usize] {
        &self.next
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn n_journeys(&self) -> usize {
        self.next.len()
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    /// Images each journey can supply before it stops being selectable.
    pub fn journey_capacity(&self) -> usize {
        if self.strict {
            self.window_len - 1
        } else {
            self.window_len
        }
    }

    /// Upper bound on the number of steps of any episode.
    pub fn max_steps(&self) -> usize {
        self.budget.min(self.next.len() * self.journey_capacity())
    }

    pub(crate) fn advance(&mut self, idx: usize) {
        self.next[idx] += 1;
        self.t += 1;
        if !self.open_at(idx) {
            self.open -= 1;
        }
    }
}

/// The result of an executed request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<'a> {
    /// Timestep after the acquisition (`1` for the first image).
    pub t: usize,
    pub journey: JourneyId,
    /// One-based position of the returned image in the journey's window.
    pub observation_index: usize,
    pub observation: &'a Embedding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step<'a> {
    Acquired(StepOutcome<'a>),
    /// No journey in the preference list could move.
    Terminal,
}

/// One episode over a trial.
#[derive(Debug, Clone)]
pub struct Simulator<'s, 'a> {
    trial: &'s TrialInstance<'a>,
    state: SimulatorState,
}

impl<'s, 'a> Simulator<'s, 'a> {
    pub fn new(trial: &'s TrialInstance<'a>, budget: usize, strict: bool) -> Result<Self> {
        let state = SimulatorState::new(trial.n_journeys(), trial.window_len(), budget, strict)?;
        Ok(Self { trial, state })
    }

    pub fn state(&self) -> &SimulatorState {
        &self.state
    }

    pub fn trial(&self) -> &'s TrialInstance<'a> {
        self.trial
    }

    pub fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    /// Executes the first selectable journey of `preference`.
    pub fn request_step(&mut self, preference: &[JourneyId]) -> Result<Step<'a>> {
        if preference.is_empty() {
            return Err(Error::Contract("empty preference list".into()));
        }
        if self.state.t >= self.state.budget {
            return Err(Error::BudgetExhausted {
                spent: self.state.t,
            });
        }
        let n = self.state.n_journeys();
        let mut listed = vec![false; n];
        let mut chosen = None;
        for &journey in preference {
            let idx = journey.check(n)?;
            if std::mem::replace(&mut listed[idx], true) {
                return Err(Error::Contract(format!(
                    "journey {journey} listed twice in preference"
                )));
            }
            if chosen.is_none() && self.state.open_at(idx) {
                chosen = Some(idx);
            }
        }
        let Some(idx) = chosen else {
            return Ok(Step::Terminal);
        };
        let observation_index = self.state.next[idx];
        let observation = &self.trial.windows()[idx][observation_index - 1];
        self.state.advance(idx);
        Ok(Step::Acquired(StepOutcome {
            t: self.state.t,
            journey: JourneyId::from_index(idx),
            observation_index,
            observation,
        }))
    }
}

/// One line of an episode trace log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceLine {
    pub t: usize,
    pub journey: JourneyId,
    pub observation_index: usize,
}

impl From<&StepOutcome<'_>> for TraceLine {
    fn from(o: &StepOutcome<'_>) -> Self {
        Self {
            t: o.t,
            journey: o.journey,
            observation_index: o.observation_index,
        }
    }
}

/// Tab-separated `t`, journey, observation index; one line per step.
pub fn format_trace_log(lines: &[TraceLine]) -> String {
    let mut out = String::new();
    for l in lines {
        let _ = writeln!(out, "{}\t{}\t{}", l.t, l.journey, l.observation_index);
    }
    out
}

pub fn parse_trace_log(text: &str) -> Result<Vec<TraceLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(no, line)| {
            let bad = || Error::Contract(format!("trace log line {}: {line:?}", no + 1));
            let fields: Vec<usize> = line
                .split('\t')
                .map(|f| f.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            match fields[..] {
                [t, journey, observation_index] if journey >= 1 => Ok(TraceLine {
                    t,
                    journey: JourneyId::from_index(journey - 1),
                    observation_index,
                }),
                _ => Err(bad()),
            }
        })
        .collect()
}
