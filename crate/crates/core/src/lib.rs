//! Desk-scale journey simulator and explore-then-exploit journey planner.
//!
//! A robot sees `N` distant objects and must find which one matches a
//! target map image. Approaching object `n` yields the images of journey
//! `n` one at a time, each costing one budget unit. The planner spends
//! `L'` images on every journey in round-robin order, then commits to the
//! journeys whose best image so far is most similar to the target. The
//! evaluator measures top-1 accuracy against spent budget.

pub mod dataset;
pub mod embedding;
pub mod error;
pub mod evaluator;
pub mod journey;
pub mod parallel;
pub mod planner;
pub mod rng;
pub mod score;
pub mod simulator;

pub use dataset::{
    generate_synthetic, load_dataset, sample_trial, save_dataset, JourneyDataset, JourneyRecord,
    SyntheticConfig, TrialInstance,
};
pub use embedding::{cosine, Embedding};
pub use error::{Error, Result};
pub use evaluator::{
    accuracy_curve, accuracy_curve_at, run_paired, run_sweep, run_trial, write_report,
    AccuracyCurve, ReportFormat, RunOptions, SweepReport, SweepSpec, TrialSource, TrialTrace,
};
pub use journey::JourneyId;
pub use planner::{ExploitMode, Phase, Planner, PlannerConfig, PlannerKind};
pub use score::{JourneySelection, ScoreTable};
pub use simulator::{Simulator, SimulatorState, Step, StepOutcome};
