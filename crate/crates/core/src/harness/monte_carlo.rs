use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::sim::{run_once, MetricsLog};
use crate::dynamics::StrategyKind;
use crate::error::{Error, Result};
use crate::seed;

pub const CSV_HEADER: &str = "run,slot,strategy,trace_sum";
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Seed of realization `run` under `master`.
pub fn run_seed(master: u64, run: u64) -> u64 {
    seed::derive(master, &[seed::RUN, run])
}

/// Per-slot mean and standard error of `Σ_j tr(P_j)` over realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub strategy: StrategyKind,
    pub n_runs: usize,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    /// Time average over the second half of the horizon: mean over runs.
    pub tail_mean: f64,
    pub tail_std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub csv_schema_version: u32,
    pub master_seed: u64,
    pub horizon: u64,
    pub n_runs: u64,
    pub strategies: Vec<Aggregate>,
}

/// Mean and standard error, summed in sorted order so the result does not
/// depend on the order of the inputs.
fn mean_se(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    dev.sort_by(f64::total_cmp);
    let var = dev.iter().sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn aggregate(strategy: StrategyKind, logs: &[MetricsLog]) -> Aggregate {
    let horizon = logs.iter().map(|l| l.trace_sum.len()).min().unwrap_or(0);
    let (mean, std_err) = (0..horizon)
        .map(|k| mean_se(&mut logs.iter().map(|l| l.trace_sum[k]).collect::<Vec<_>>()))
        .unzip();
    let tail_start = horizon / 2;
    let mut tails: Vec<f64> = logs
        .iter()
        .map(|l| {
            let mut t = l.trace_sum[tail_start..horizon].to_vec();
            t.sort_by(f64::total_cmp);
            t.iter().sum::<f64>() / (horizon - tail_start).max(1) as f64
        })
        .collect();
    let (tail_mean, tail_std_err) = mean_se(&mut tails);
    Aggregate {
        strategy,
        n_runs: logs.len(),
        mean,
        std_err,
        tail_mean,
        tail_std_err,
    }
}

/// All realizations of `cfg.strategy`, in run order.
pub fn run_monte_carlo(cfg: &ScenarioConfig) -> Result<Vec<MetricsLog>> {
    cfg.validate()?;
    (0..cfg.n_runs)
        .into_par_iter()
        .map(|r| run_once(cfg, run_seed(cfg.master_seed, r)))
        .collect()
}

/// Every strategy over the same realizations (same truth, range factors and
/// initial estimates per run).
pub fn compare(cfg: &ScenarioConfig) -> Result<Vec<(StrategyKind, Vec<MetricsLog>)>> {
    StrategyKind::ALL
        .iter()
        .map(|&kind| {
            let c = ScenarioConfig {
                strategy: kind,
                ..cfg.clone()
            };
            Ok((kind, run_monte_carlo(&c)?))
        })
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Per-run, per-slot metrics as CSV.
pub fn write_csv(path: &Path, results: &[(StrategyKind, Vec<MetricsLog>)]) -> Result<()> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (kind, logs) in results {
        for (run, log) in logs.iter().enumerate() {
            for (slot, v) in log.trace_sum.iter().enumerate() {
                writeln!(out, "{run},{slot},{kind},{v:e}").expect("writing to a String");
            }
        }
    }
    std::fs::write(path, out).map_err(io_err(path))
}

/// `metrics.csv` → `metrics.summary.json`.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

pub fn write_summary(
    path: &Path,
    cfg: &ScenarioConfig,
    results: &[(StrategyKind, Vec<MetricsLog>)],
) -> Result<Summary> {
    let summary = Summary {
        schema_version: super::config::CONFIG_SCHEMA_VERSION,
        csv_schema_version: CSV_SCHEMA_VERSION,
        master_seed: cfg.master_seed,
        horizon: cfg.horizon,
        n_runs: cfg.n_runs,
        strategies: results
            .iter()
            .map(|(k, logs)| aggregate(*k, logs))
            .collect(),
    };
    let text = serde_json::to_string_pretty(&summary)?;
    std::fs::write(path, text + "\n").map_err(io_err(path))?;
    Ok(summary)
}
