//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use journeylab::dataset::TrialInstance;
use journeylab::evaluator::{render_report_csv, render_report_json, PairedRun};
use journeylab::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

type Outcome = Result<String, String>;

/// Cosine computed straight from the stored values, independent of the
/// library's scoring path.
fn oracle_cosine(a: &[f32], b: &[f32]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum();
    let aa: f64 = a.iter().map(|x| (*x as f64).powi(2)).sum();
    let bb: f64 = b.iter().map(|x| (*x as f64).powi(2)).sum();
    dot / (aa * bb).sqrt()
}

fn within_time(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(limit_s) {
        return Err(format!("runtime {elapsed:.2?} exceeds {limit_s} s"));
    }
    Ok(())
}

// 1. Every step changes one state entry by +1 and sum(s - 1) = t.
fn conservation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0usize;
    let mut steps = 0usize;
    for episode in 0..1000u64 {
        let n = rng.random_range(1..=10);
        let len = rng.random_range(1..=20);
        let ds = generate_synthetic(&SyntheticConfig {
            n_journeys: n,
            length: len,
            dim: 4,
            alpha_far: 0.5,
            alpha_near: 1.0,
            confusability: 0.5,
            noise: 1.0,
            query_noise: 0.0,
            orthogonal_prototypes: false,
            seed: episode,
        })
        .map_err(|e| e.to_string())?;
        let trial = sample_trial(&ds, len, episode).map_err(|e| e.to_string())?;
        let budget = rng.random_range(1..=n * len + 5);
        let mut sim = Simulator::new(&trial, budget, rng.random_bool(0.3)).map_err(|e| e.to_string())?;
        while !sim.is_terminal() {
            let mut pref: Vec<JourneyId> = JourneyId::all(n).collect();
            pref.shuffle(&mut rng);
            pref.truncate(rng.random_range(1..=n));
            let before = sim.state().positions().to_vec();
            let step = sim.request_step(&pref).map_err(|e| e.to_string())?;
            let after = sim.state().positions();
            let diffs: Vec<isize> = before
                .iter()
                .zip(after)
                .map(|(b, a)| *a as isize - *b as isize)
                .collect();
            let changed = diffs.iter().filter(|&&d| d != 0).count();
            match step {
                Step::Acquired(_) => {
                    steps += 1;
                    if changed != 1 || !diffs.contains(&1) {
                        violations += 1;
                    }
                }
                Step::Terminal => {
                    if changed != 0 {
                        violations += 1;
                    }
                }
            }
            let sum: usize = after.iter().map(|s| s - 1).sum();
            if sum != sim.state().t() {
                violations += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within_time(elapsed, 5)?;
    if violations > 0 {
        return Err(format!("{violations} violations over {steps} steps"));
    }
    Ok(format!("1000 episodes, {steps} steps, 0 violations, {elapsed:.2?}"))
}

// 2. Incremental score table equals the brute-force prefix maximum.
fn score_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    for instance in 0..100u64 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(1..=5);
        let d = rng.random_range(1..=4);
        let ds = generate_synthetic(&SyntheticConfig {
            n_journeys: n,
            length: len,
            dim: d,
            alpha_far: 0.3,
            alpha_near: 1.2,
            confusability: 0.4,
            noise: 1.0,
            query_noise: 0.5,
            orthogonal_prototypes: false,
            seed: instance,
        })
        .map_err(|e| e.to_string())?;
        let trial = sample_trial(&ds, len, instance).map_err(|e| e.to_string())?;
        let cfg = PlannerConfig::random(PlannerKind::RandomStep, instance);
        let mut sim = Simulator::new(&trial, n * len, false).map_err(|e| e.to_string())?;
        let mut planner = Planner::new(&cfg, n, len).map_err(|e| e.to_string())?;
        let mut table = ScoreTable::new(n);
        while !sim.is_terminal() {
            let pref = planner.next_preference(&table, sim.state()).map_err(|e| e.to_string())?;
            let Step::Acquired(o) = sim.request_step(&pref).map_err(|e| e.to_string())? else {
                break;
            };
            table.update(o.journey, trial.query(), o.observation).map_err(|e| e.to_string())?;
            planner.notify_outcome(&o).map_err(|e| e.to_string())?;
            for j in JourneyId::all(n) {
                let seen = sim.state().next_index(j).unwrap() - 1;
                let window = trial.window(j).unwrap();
                let direct = window[..seen]
                    .iter()
                    .map(|e| oracle_cosine(trial.query().values(), e.values()))
                    .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))));
                let inc = table.score(j).unwrap();
                checks += 1;
                match (inc, direct) {
                    (None, None) => {}
                    (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                    _ => return Err(format!("instance {instance}: observed/unobserved mismatch")),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    within_time(elapsed, 5)?;
    if worst > 1e-12 {
        return Err(format!("max deviation {worst:e} > 1e-12"));
    }
    Ok(format!("100 instances, {checks} comparisons, max deviation {worst:e}, {elapsed:.2?}"))
}

/// Two-phase planner written directly from its description: `L'` actions
/// per journey breadth-first, then run the best-scoring unfinished journey
/// to completion, repeatedly, until the budget runs out.
fn reference_actions(trial: &TrialInstance<'_>, l_prime: usize, budget: usize) -> Vec<usize> {
    let n = trial.n_journeys();
    let len = trial.window_len();
    let query = trial.query().values();
    let mut seen = vec![0usize; n];
    let mut best: Vec<Option<f64>> = vec![None; n];
    let mut actions = Vec::new();
    let act = |j: usize, seen: &mut Vec<usize>, best: &mut Vec<Option<f64>>, actions: &mut Vec<usize>| {
        let obs = &trial.windows()[j][seen[j]];
        let c = oracle_cosine(query, obs.values()).clamp(-1.0, 1.0);
        best[j] = Some(best[j].map_or(c, |b: f64| b.max(c)));
        seen[j] += 1;
        actions.push(j + 1);
    };
    for _round in 0..l_prime.min(len) {
        for j in 0..n {
            if actions.len() == budget {
                return actions;
            }
            act(j, &mut seen, &mut best, &mut actions);
        }
    }
    while actions.len() < budget {
        let mut chosen: Option<usize> = None;
        for j in 0..n {
            if seen[j] >= len {
                continue;
            }
            let better = match chosen {
                None => true,
                Some(c) => match (best[j], best[c]) {
                    (Some(a), Some(b)) => a > b,
                    (Some(_), None) => true,
                    _ => false,
                },
            };
            if better {
                chosen = Some(j);
            }
        }
        let Some(j) = chosen else { break };
        while seen[j] < len && actions.len() < budget {
            act(j, &mut seen, &mut best, &mut actions);
        }
    }
    actions
}

// 3. Planner matches the reference implementation.
fn planner_oracle() -> Outcome {
    let mut instances = 0usize;
    for n in 1..=3 {
        for len in 1..=3 {
            for seed in 0..8u64 {
                let ds = generate_synthetic(&SyntheticConfig {
                    n_journeys: n,
                    length: len,
                    dim: 5,
                    alpha_far: 0.2,
                    alpha_near: 1.5,
                    confusability: 0.8,
                    noise: if seed % 4 == 0 { 0.0 } else { 1.2 },
                    query_noise: 0.6,
                    orthogonal_prototypes: true,
                    seed,
                })
                .map_err(|e| e.to_string())?;
                let trial = sample_trial(&ds, len, seed).map_err(|e| e.to_string())?;
                instances += 1;
                for l_prime in 1..=4 {
                    for budget in 1..=n * len {
                        let cfg = PlannerConfig::explore_exploit(l_prime, ExploitMode::Commit);
                        let tr = run_trial(&trial, &cfg, budget).map_err(|e| e.to_string())?;
                        let got: Vec<usize> = tr.records.iter().map(|r| r.executed_journey.get()).collect();
                        let expected = reference_actions(&trial, l_prime, budget);
                        if got != expected {
                            return Err(format!(
                                "N={n} L={len} seed={seed} L'={l_prime} B={budget}: {got:?} != {expected:?}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{instances} instances x L' in 1..=4 x every budget, exact match"))
}

const Z_999: f64 = 3.290_526_731_491_926;

// 4. Uninformative data pins every planner to chance.
fn random_calibration() -> Outcome {
    let start = Instant::now();
    let cfg = SyntheticConfig {
        n_journeys: 10,
        length: 100,
        dim: 16,
        alpha_far: 0.0,
        alpha_near: 0.0,
        confusability: 0.0,
        noise: 1.0,
        query_noise: 0.0,
        orthogonal_prototypes: true,
        seed: 404,
    };
    let spec = SweepSpec {
        planners: vec![
            PlannerConfig::random(PlannerKind::RandomJourney, 1),
            PlannerConfig::random(PlannerKind::RandomStep, 2),
            PlannerConfig::explore_exploit(20, ExploitMode::Commit),
        ],
        l_primes: vec![],
        budgets: vec![1, 2, 5, 10, 20, 50, 100, 200, 500, 1000],
        n_trials: 10_000,
        master_seed: 4,
        window_length: None,
    };
    let report = run_sweep(&TrialSource::Synthetic(cfg), &spec, &RunOptions::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let p: f64 = 0.1;
    let half = Z_999 * (p * (1.0 - p) / 10_000.0).sqrt();
    let mut worst = 0.0f64;
    for c in &report.configurations {
        for pt in &c.curve.points {
            let dev = (pt.accuracy - p).abs();
            worst = worst.max(dev);
            if dev > half {
                return Err(format!(
                    "{} at t={} accuracy {} outside [{:.4}, {:.4}]",
                    c.planner,
                    pt.t,
                    pt.accuracy,
                    p - half,
                    p + half
                ));
            }
        }
    }
    within_time(elapsed, 60)?;
    Ok(format!(
        "3 planners x 10 budgets x 10000 trials within 0.1 +/- {half:.4} (worst {worst:.4}), {elapsed:.2?}"
    ))
}

fn confusable() -> SyntheticConfig {
    SyntheticConfig {
        n_journeys: 10,
        length: 100,
        dim: 64,
        alpha_far: 0.2,
        alpha_near: 2.0,
        confusability: 1.0,
        noise: 0.5,
        query_noise: 0.0,
        orthogonal_prototypes: true,
        seed: 505,
    }
}

// 5. Explore-then-exploit beats the random journey baseline.
fn superiority() -> Outcome {
    let start = Instant::now();
    let spec = SweepSpec {
        planners: vec![
            PlannerConfig::explore_exploit(20, ExploitMode::Commit),
            PlannerConfig::random(PlannerKind::RandomJourney, 5),
        ],
        l_primes: vec![],
        budgets: vec![500],
        n_trials: 10_000,
        master_seed: 5,
        window_length: None,
    };
    let report = run_sweep(&TrialSource::Synthetic(confusable()), &spec, &RunOptions::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let acc = |i: usize| report.configurations[i].curve.final_accuracy().unwrap();
    let (p1, p2, n) = (acc(0), acc(1), 10_000.0);
    let pooled = (p1 + p2) / 2.0;
    let z = (p1 - p2) / (pooled * (1.0 - pooled) * 2.0 / n).sqrt();
    let p_value = 1.0 - Normal::standard().cdf(z);
    within_time(elapsed, 120)?;
    if !(p1 > p2 && p_value < 0.01) {
        return Err(format!("explore_exploit {p1} vs random_journey {p2}, z={z:.2}, p={p_value:e}"));
    }
    Ok(format!(
        "accuracy@500 explore_exploit {p1:.4} vs random_journey {p2:.4}, z={z:.1}, p={p_value:.1e}, {elapsed:.2?}"
    ))
}

fn paired_diff(run: &PairedRun, a: usize, b: usize, k: usize) -> (f64, f64) {
    let d: Vec<f64> = run
        .success
        .iter()
        .map(|s| f64::from(u8::from(s[a][k])) - f64::from(u8::from(s[b][k])))
        .collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

// 6. An intermediate L' beats both extremes at matched budget.
fn l_prime_tradeoff() -> Outcome {
    let start = Instant::now();
    let l_primes = vec![1, 5, 10, 20, 50, 100];
    let spec = SweepSpec {
        planners: vec![PlannerConfig::explore_exploit(20, ExploitMode::Commit)],
        l_primes: l_primes.clone(),
        budgets: vec![300],
        n_trials: 10_000,
        master_seed: 6,
        window_length: None,
    };
    let run = run_paired(&TrialSource::Synthetic(confusable()), &spec, &RunOptions::default())
        .map_err(|e| e.to_string())?;
    let k = run.time_index(300).unwrap();
    let acc: Vec<String> = l_primes
        .iter()
        .enumerate()
        .map(|(i, l)| format!("L'={l}:{:.4}", run.curve(i).points[k].accuracy))
        .collect();
    let (low, high) = (0, l_primes.len() - 1);
    let mut best: Option<(usize, f64)> = None;
    let mut details = Vec::new();
    for (i, &l) in l_primes.iter().enumerate().take(high).skip(1) {
        let (d_low, se_low) = paired_diff(&run, i, low, k);
        let (d_high, se_high) = paired_diff(&run, i, high, k);
        let margin_low = if se_low > 0.0 { d_low / se_low } else if d_low > 0.0 { f64::INFINITY } else { 0.0 };
        let margin_high = if se_high > 0.0 { d_high / se_high } else if d_high > 0.0 { f64::INFINITY } else { 0.0 };
        details.push(format!(
            "L'={l}: +{d_low:.4} ({margin_low:.1} SE) vs L'=1, {d_high:+.4} ({margin_high:.1} SE) vs L'=100"
        ));
        let ok = d_low > 3.0 * se_low && d_high > 3.0 * se_high && d_low > 0.0 && d_high > 0.0;
        if ok && best.is_none_or(|(_, m)| margin_high > m) {
            best = Some((l, margin_high));
        }
    }
    let elapsed = start.elapsed();
    let summary = format!("{} | {} | {elapsed:.2?}", acc.join(" "), details.join("; "));
    match best {
        Some((l, _)) => Ok(format!("L'={l} beats both extremes: {summary}")),
        None => Err(format!("no intermediate L' beats both extremes by > 3 SE: {summary}")),
    }
}

// 7. Noiseless synthetic similarity matches the closed form.
fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for c in [0.0, 0.5, 1.0, 3.0] {
        let cfg = SyntheticConfig {
            n_journeys: 5,
            length: 10,
            dim: 8,
            alpha_far: 0.2,
            alpha_near: 2.0,
            confusability: c,
            noise: 0.0,
            query_noise: 0.0,
            orthogonal_prototypes: true,
            seed: 7,
        };
        let ds = generate_synthetic(&cfg).map_err(|e| e.to_string())?;
        for r in ds.records() {
            for (j, obs) in r.observations.iter().enumerate() {
                let alpha = cfg.alpha_far + (cfg.alpha_near - cfg.alpha_far) * j as f64 / 9.0;
                let expected = alpha / (alpha * alpha + c * c).sqrt();
                let got = cosine(&r.query, obs).map_err(|e| e.to_string())?;
                worst = worst.max((got - expected).abs());
            }
        }
    }
    if worst > 1e-6 {
        return Err(format!("max deviation {worst:e} > 1e-6"));
    }
    Ok(format!("N=5 L=10, c in {{0, 0.5, 1, 3}}, max deviation {worst:.1e}"))
}

// 8. Reports are byte-identical across reruns and worker counts.
fn determinism() -> Outcome {
    let ds = generate_synthetic(&SyntheticConfig {
        noise: 0.8,
        query_noise: 0.5,
        n_journeys: 6,
        length: 30,
        dim: 16,
        ..confusable()
    })
    .map_err(|e| e.to_string())?;
    let spec = SweepSpec {
        planners: vec![
            PlannerConfig::explore_exploit(20, ExploitMode::Commit),
            PlannerConfig::explore_exploit(20, ExploitMode::Greedy),
            PlannerConfig::random(PlannerKind::RandomJourney, 3),
            PlannerConfig::random(PlannerKind::RandomStep, 4),
        ],
        l_primes: vec![1, 5, 20],
        budgets: vec![],
        n_trials: 400,
        master_seed: 8,
        window_length: Some(25),
    };
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut reference: Option<(Vec<u8>, Vec<u8>)> = None;
    for (attempt, workers) in [1usize, 1, 2, 4, 0].into_iter().enumerate() {
        let report = run_sweep(&TrialSource::Dataset(&ds), &spec, &RunOptions { workers })
            .map_err(|e| e.to_string())?;
        let csv = dir.path().join(format!("r{attempt}.csv"));
        let json = dir.path().join(format!("r{attempt}.json"));
        write_report(&report, &csv, ReportFormat::Csv).map_err(|e| e.to_string())?;
        write_report(&report, &json, ReportFormat::Json).map_err(|e| e.to_string())?;
        let bytes = (std::fs::read(&csv).unwrap(), std::fs::read(&json).unwrap());
        assert_eq!(bytes.0, render_report_csv(&report).unwrap().into_bytes());
        assert_eq!(bytes.1, render_report_json(&report).unwrap().into_bytes());
        match &reference {
            None => reference = Some(bytes),
            Some(r) if *r != bytes => return Err(format!("workers={workers} produced different bytes")),
            Some(_) => {}
        }
    }
    let len = reference.map(|r| r.0.len()).unwrap_or(0);
    Ok(format!("5 runs (workers 1, 1, 2, 4, all) identical; csv {len} bytes"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 state conservation", conservation),
        ("2 score table oracle", score_oracle),
        ("3 planner oracle", planner_oracle),
        ("4 random-baseline calibration", random_calibration),
        ("5 superiority over random", superiority),
        ("6 L' trade-off", l_prime_tradeoff),
        ("7 noiseless closed form", closed_form),
        ("8 determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match run() {
            Ok(msg) => println!("PASS  criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
