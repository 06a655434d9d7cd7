mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use journeylab::evaluator::planner_seed;
use journeylab::simulator::{format_trace_log, TraceLine};
use journeylab::{
    cosine, generate_synthetic, load_dataset, run_sweep, run_trial, sample_trial, save_dataset,
    Error, ExploitMode, JourneyDataset, PlannerConfig, PlannerKind, ReportFormat, RunOptions,
    SweepSpec, SyntheticConfig, TrialSource,
};

use crate::config::{read_json, write_provenance, DatasetRef, SweepConfig};

const WORKERS_ENV: &str = "JOURNEYLAB_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "journeylab", version, about = "Journey simulator and explore-then-exploit planner evaluation")]
struct Cli {
    /// Print progress details to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset from a JSON config.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one trial and write its trace.
    Run {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::ExploreExploit)]
        planner: KindArg,
        #[arg(long = "l-prime", default_value_t = 20)]
        l_prime: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Commit)]
        mode: ModeArg,
        /// Acquisition budget; defaults to N * L.
        #[arg(long)]
        budget: Option<usize>,
        /// Trial seed (window offsets, target, random planner stream).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Window length; defaults to the shortest journey.
        #[arg(long)]
        length: Option<usize>,
        /// Only the first L - 1 images of a journey are reachable.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the tab-separated step log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run a sweep config and write the accuracy report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the budget grid with a single budget.
        #[arg(long)]
        budget: Option<usize>,
        /// Override the L' list with a single value.
        #[arg(long = "l-prime")]
        l_prime: Option<usize>,
    },
    /// Summarize a dataset.
    Inspect {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    ExploreExploit,
    RandomJourney,
    RandomStep,
}

impl From<KindArg> for PlannerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ExploreExploit => PlannerKind::ExploreExploit,
            KindArg::RandomJourney => PlannerKind::RandomJourney,
            KindArg::RandomStep => PlannerKind::RandomStep,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Commit,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 for bad configuration or input, 1 for failures while running.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_input_error() => 2,
        _ => 1,
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { config, out, seed } => cmd_gen(&config, &out, seed),
        Command::Run {
            manifest,
            planner,
            l_prime,
            mode,
            budget,
            seed,
            length,
            strict,
            out,
            log,
        } => {
            let cfg = PlannerConfig {
                kind: planner.into(),
                explore_budget_per_journey: l_prime,
                exploit_mode: match mode {
                    ModeArg::Commit => ExploitMode::Commit,
                    ModeArg::Greedy => ExploitMode::Greedy,
                },
                seed: 0,
                strict_paper_semantics: strict,
            };
            cmd_run(&manifest, cfg, budget, seed, length, &out, log.as_deref())
        }
        Command::Sweep {
            config,
            out,
            format,
            seed,
            trials,
            budget,
            l_prime,
        } => {
            let format = match format {
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Json => ReportFormat::Json,
            };
            cmd_sweep(&config, &out, format, seed, trials, budget, l_prime, cli.verbose)
        }
        Command::Inspect { manifest } => cmd_inspect(&manifest),
    }
}

fn cmd_gen(config: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let mut cfg: SyntheticConfig = read_json(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let dataset = generate_synthetic(&cfg)?;
    fs::create_dir_all(out).map_err(|e| Error::Io { path: out.to_path_buf(), source: e })?;
    let manifest = save_dataset(&dataset, out)?;
    write_provenance(&manifest, "gen", serde_json::to_value(&cfg)?, Some(cfg.seed))?;
    println!("{}", manifest.display());
    Ok(())
}

fn cmd_run(
    manifest: &Path,
    cfg: PlannerConfig,
    budget: Option<usize>,
    seed: u64,
    length: Option<usize>,
    out: &Path,
    log: Option<&Path>,
) -> Result<()> {
    let dataset = load_dataset(manifest)?;
    let window = length.unwrap_or_else(|| dataset.min_length());
    let budget = budget.unwrap_or(dataset.n_journeys() * window);
    let trial = sample_trial(&dataset, window, seed)?;
    let resolved = PlannerConfig {
        seed: planner_seed(&cfg, seed),
        ..cfg
    };
    let mut trace = run_trial(&trial, &resolved, budget)?;
    trace.trial_seed = Some(seed);

    let mut text = serde_json::to_string_pretty(&trace)?;
    text.push('\n');
    fs::write(out, text).map_err(|e| Error::Io { path: out.to_path_buf(), source: e })?;
    let provenance = serde_json::json!({
        "manifest": manifest,
        "planner": resolved,
        "budget": budget,
        "window_length": window,
        "trial_seed": seed,
    });
    write_provenance(out, "run", provenance, Some(seed))?;
    if let Some(log) = log {
        let lines: Vec<TraceLine> = trace
            .records
            .iter()
            .map(|r| TraceLine {
                t: r.t,
                journey: r.executed_journey,
                observation_index: r.observation_index,
            })
            .collect();
        fs::write(log, format_trace_log(&lines))
            .map_err(|e| Error::Io { path: log.to_path_buf(), source: e })?;
    }
    let argmax = trace
        .final_argmax()
        .map_or_else(|| "none".to_string(), |j| j.to_string());
    println!(
        "success={} argmax={} target={} cost={}",
        trace.final_success(),
        argmax,
        trace.target_id,
        trace.records.len()
    );
    Ok(())
}

fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")).into()),
        },
        Err(_) => Ok(0),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config_path: &Path,
    out: &Path,
    format: ReportFormat,
    seed: Option<u64>,
    trials: Option<usize>,
    budget: Option<usize>,
    l_prime: Option<usize>,
    verbose: bool,
) -> Result<()> {
    let mut config: SweepConfig = read_json(config_path)?;
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    if let Some(trials) = trials {
        config.n_trials = trials;
    }
    if let Some(budget) = budget {
        config.budgets = vec![budget];
    }
    if let Some(l) = l_prime {
        config.l_prime = vec![l];
    }
    let workers = workers_from_env()?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let loaded: JourneyDataset;
    let source = match &config.dataset {
        DatasetRef::Manifest(path) => {
            loaded = load_dataset(base.join(path))?;
            TrialSource::Dataset(&loaded)
        }
        DatasetRef::Synthetic { synthetic, per_trial: true } => TrialSource::Synthetic(synthetic.clone()),
        DatasetRef::Synthetic { synthetic, per_trial: false } => {
            loaded = generate_synthetic(synthetic)?;
            TrialSource::Dataset(&loaded)
        }
    };
    let spec = SweepSpec {
        planners: config.planners.clone(),
        l_primes: config.l_prime.clone(),
        budgets: config.budgets.clone(),
        n_trials: config.n_trials,
        master_seed: config.master_seed,
        window_length: config.window_length,
    };
    if verbose {
        eprintln!(
            "sweep: {} configurations x {} trials on {source} (workers={workers})",
            spec.configurations().len(),
            spec.n_trials
        );
    }
    let report = run_sweep(&source, &spec, &RunOptions { workers })?;
    journeylab::write_report(&report, out, format)?;
    write_provenance(out, "sweep", serde_json::to_value(&config)?, Some(config.master_seed))
        .context("writing provenance")?;
    for c in &report.configurations {
        println!(
            "{}\tmean_accuracy={:.4}\tfinal_accuracy={:.4}",
            c.planner,
            c.curve.mean_accuracy(),
            c.curve.final_accuracy().unwrap_or(0.0)
        );
    }
    Ok(())
}

fn cmd_inspect(manifest: &Path) -> Result<()> {
    let ds = load_dataset(manifest)?;
    println!("journeys: {}", ds.n_journeys());
    println!("dim: {}", ds.dim());
    for r in ds.records() {
        println!("journey {}: length {}", r.id, r.observations.len());
    }
    println!("query cosine matrix:");
    for a in ds.records() {
        let row: Vec<String> = ds
            .records()
            .iter()
            .map(|b| cosine(&a.query, &b.query).map(|c| format!("{c:+.3}")))
            .collect::<Result<_, _>>()?;
        println!("  {}", row.join(" "));
    }
    println!("observation-to-query cosine (mean own, mean foreign):");
    for r in ds.records() {
        let mut own = 0.0;
        let mut foreign = 0.0;
        let mut n_foreign = 0usize;
        for other in ds.records() {
            for obs in &other.observations {
                let c = cosine(&r.query, obs)?;
                if other.id == r.id {
                    own += c;
                } else {
                    foreign += c;
                    n_foreign += 1;
                }
            }
        }
        own /= r.observations.len() as f64;
        let foreign = if n_foreign > 0 { foreign / n_foreign as f64 } else { f64::NAN };
        println!("  journey {}: own {own:+.3} foreign {foreign:+.3}", r.id);
    }
    Ok(())
}
