use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::SweepReport;
use crate::error::{Error, Result};
use crate::planner::PlannerKind;

pub const CSV_HEADER: &str = "planner,kind_params,l_prime,exploit_mode,t,accuracy,n_trials,master_seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

fn check_complete(report: &SweepReport) -> Result<()> {
    if report.configurations.is_empty()
        || report.configurations.iter().any(|c| c.curve.points.is_empty())
    {
        return Err(Error::Contract("report has no data points".into()));
    }
    Ok(())
}

/// One data row per (configuration, time), in report order. `l_prime` and
/// `exploit_mode` are empty for the random planners.
pub fn render_report_csv(report: &SweepReport) -> Result<String> {
    check_complete(report)?;
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in &report.configurations {
        let p = &c.planner;
        let (l_prime, mode) = match p.kind {
            PlannerKind::ExploreExploit => (
                p.explore_budget_per_journey.to_string(),
                p.exploit_mode.to_string(),
            ),
            _ => (String::new(), String::new()),
        };
        for pt in &c.curve.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                p.kind,
                p.kind_params(),
                l_prime,
                mode,
                pt.t,
                pt.accuracy,
                pt.n_trials,
                report.master_seed
            );
        }
    }
    Ok(out)
}

pub fn render_report_json(report: &SweepReport) -> Result<String> {
    check_complete(report)?;
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    Ok(text)
}

pub fn write_report(report: &SweepReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => render_report_csv(report)?,
        ReportFormat::Json => render_report_json(report)?,
    };
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_report_json(path: impl AsRef<Path>) -> Result<SweepReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: malformed report: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub planner: PlannerKind,
    pub kind_params: String,
    pub l_prime: Option<usize>,
    pub exploit_mode: Option<String>,
    pub t: usize,
    pub accuracy: f64,
    pub n_trials: usize,
    pub master_seed: u64,
}

pub fn parse_report_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Config("report csv: unexpected header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| Error::Config(format!("report csv row {}: bad {what}", i + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(bad("column count"));
            }
            let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
            Ok(CsvRow {
                planner: f[0].parse()?,
                kind_params: f[1].to_string(),
                l_prime: opt(f[2]).map(|s| s.parse().map_err(|_| bad("l_prime"))).transpose()?,
                exploit_mode: opt(f[3]),
                t: f[4].parse().map_err(|_| bad("t"))?,
                accuracy: f[5].parse().map_err(|_| bad("accuracy"))?,
                n_trials: f[6].parse().map_err(|_| bad("n_trials"))?,
                master_seed: f[7].parse().map_err(|_| bad("master_seed"))?,
            })
        })
        .collect()
}
