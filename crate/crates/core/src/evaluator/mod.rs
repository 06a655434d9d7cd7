//! End-to-end trials, accuracy-versus-budget curves and sweeps.

mod report;
mod sweep;

pub use report::{
    parse_report_csv, read_report_json, render_report_csv, render_report_json, write_report,
    CsvRow, ReportFormat, CSV_HEADER,
};
pub use sweep::{
    planner_seed,
    run_paired, run_sweep, ConfigurationCurve, PairedRun, RunOptions, SweepReport, SweepSpec,
    TrialSource,
};

use serde::{Deserialize, Serialize};

use crate::dataset::TrialInstance;
use crate::error::{Error, Result};
use crate::journey::JourneyId;
use crate::planner::{Planner, PlannerConfig};
use crate::score::ScoreTable;
use crate::simulator::{Simulator, Step};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub executed_journey: JourneyId,
    pub observation_index: usize,
    pub current_argmax: Option<JourneyId>,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub trial_seed: Option<u64>,
    pub planner: PlannerConfig,
    pub target_id: JourneyId,
    pub budget: usize,
    pub records: Vec<StepRecord>,
}

impl TrialTrace {
    /// Success at time `t`; a trace that ended before `t` keeps its final
    /// value, and no record at all counts as failure.
    pub fn success_at(&self, t: usize) -> bool {
        if t == 0 || self.records.is_empty() {
            return false;
        }
        let last = t.min(self.records.len());
        self.records[last - 1].success
    }

    pub fn final_success(&self) -> bool {
        self.records.last().is_some_and(|r| r.success)
    }

    pub fn final_argmax(&self) -> Option<JourneyId> {
        self.records.last().and_then(|r| r.current_argmax)
    }
}

/// Runs one episode, calling `on_step` after every acquisition.
///
/// Every acquired image updates the score table; success is judged by the
/// best journey over all journeys, completed or not.
pub(crate) fn run_episode(
    trial: &TrialInstance<'_>,
    cfg: &PlannerConfig,
    budget: usize,
    mut on_step: impl FnMut(&StepRecord),
) -> Result<()> {
    let n = trial.n_journeys();
    let mut sim = Simulator::new(trial, budget, cfg.strict_paper_semantics)?;
    let mut planner = Planner::new(cfg, n, trial.window_len())?;
    let mut scores = ScoreTable::new(n);
    let query = trial.query();
    let target = trial.target();
    while !sim.is_terminal() {
        let step_no = sim.state().t() + 1;
        let at = |err: Error| err.context(format!("step t={step_no}"));
        let preference = planner.next_preference(&scores, sim.state()).map_err(at)?;
        let outcome = match sim.request_step(&preference).map_err(at)? {
            Step::Acquired(outcome) => outcome,
            Step::Terminal => break,
        };
        let at = |err: Error| err.context(format!("step t={}", outcome.t));
        scores
            .update(outcome.journey, query, outcome.observation)
            .map_err(at)?;
        planner.notify_outcome(&outcome).map_err(at)?;
        let current_argmax = scores.best_overall().map(|s| s.journey);
        on_step(&StepRecord {
            t: outcome.t,
            executed_journey: outcome.journey,
            observation_index: outcome.observation_index,
            current_argmax,
            success: current_argmax == Some(target),
        });
    }
    Ok(())
}

pub fn run_trial(trial: &TrialInstance<'_>, cfg: &PlannerConfig, budget: usize) -> Result<TrialTrace> {
    let mut records = Vec::new();
    run_episode(trial, cfg, budget, |r| records.push(r.clone()))?;
    Ok(TrialTrace {
        trial_seed: None,
        planner: cfg.clone(),
        target_id: trial.target(),
        budget,
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: usize,
    pub accuracy: f64,
    pub successes: usize,
    pub n_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCurve {
    pub points: Vec<CurvePoint>,
}

impl AccuracyCurve {
    pub(crate) fn from_counts(ts: &[usize], successes: &[usize], n_trials: usize) -> Self {
        let points = ts
            .iter()
            .zip(successes)
            .map(|(&t, &s)| CurvePoint {
                t,
                accuracy: s as f64 / n_trials as f64,
                successes: s,
                n_trials,
            })
            .collect();
        Self { points }
    }

    pub fn at(&self, t: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.t == t)
    }

    pub fn final_accuracy(&self) -> Option<f64> {
        self.points.last().map(|p| p.accuracy)
    }

    /// Mean accuracy over the curve's points.
    pub fn mean_accuracy(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().map(|p| p.accuracy).sum::<f64>() / self.points.len() as f64
    }
}

/// Accuracy at every `t` from 1 to the longest trace.
pub fn accuracy_curve(traces: &[TrialTrace]) -> Result<AccuracyCurve> {
    let max_t = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
    let ts: Vec<usize> = (1..=max_t).collect();
    accuracy_curve_at(traces, &ts)
}

/// Accuracy at the given times (sorted and de-duplicated).
pub fn accuracy_curve_at(traces: &[TrialTrace], ts: &[usize]) -> Result<AccuracyCurve> {
    if traces.is_empty() {
        return Err(Error::Contract("accuracy curve needs at least one trace".into()));
    }
    let mut ts = ts.to_vec();
    ts.sort_unstable();
    ts.dedup();
    let counts: Vec<usize> = ts
        .iter()
        .map(|&t| traces.iter().filter(|tr| tr.success_at(t)).count())
        .collect();
    Ok(AccuracyCurve::from_counts(&ts, &counts, traces.len()))
}
