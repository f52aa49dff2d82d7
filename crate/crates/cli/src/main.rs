use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use trackselect::game::{
    check_proposition, enumerate_profiles, is_pareto_optimal, nash_set, Proposition,
};
use trackselect::harness::{
    compare, default_scenario, run_monte_carlo, summary_path, write_csv, write_summary, Summary,
};
use trackselect::{
    Error, GameSpec, ProfileSpace, Result, ScenarioConfig, StrategyKind, StrategyProfile,
};

#[derive(Parser)]
#[command(
    name = "trackselect",
    version,
    about = "Track selection for a network of multifunction radars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run Monte Carlo realizations of one strategy and write per-slot metrics.
    Simulate(RunArgs),
    /// Run every strategy over the same realizations.
    Compare(RunArgs),
    /// Enumerate the equilibria of a game instance given as JSON.
    Equilibria(EquilibriaArgs),
    /// Print the default scenario as JSON.
    DefaultConfig {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON; the built-in default scenario when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// standalone, random-k, random-slot, best-response or centralized.
    #[arg(long)]
    strategy: Option<StrategyKind>,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "k-reinit")]
    k_reinit: Option<u64>,
    /// Metrics CSV; a `.summary.json` file is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Full,
    Distinct,
}

impl From<Space> for ProfileSpace {
    fn from(s: Space) -> Self {
        match s {
            Space::Full => ProfileSpace::Full,
            Space::Distinct => ProfileSpace::Distinct,
        }
    }
}

#[derive(Args)]
struct EquilibriaArgs {
    /// Game instance JSON (n_radars, n_targets, m, c, gain_table).
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    space: Space,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn scenario(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => ScenarioConfig::load(path)?,
            None => default_scenario(),
        };
        if let Some(s) = self.strategy {
            cfg.strategy = s;
        }
        if let Some(n) = self.runs {
            cfg.n_runs = n;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(a) = self.alpha {
            cfg.dynamics.alpha = a;
        }
        if let Some(k) = self.k_reinit {
            cfg.dynamics.k_reinit = k;
        }
        if let Some(out) = &self.out {
            cfg.output = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_summary(summary: &Summary, csv: &Path) {
    println!("wrote {}", csv.display());
    println!("strategy        tail mean     std err");
    for a in &summary.strategies {
        println!(
            "{:<15} {:<13.6e} {:.3e}",
            a.strategy.name(),
            a.tail_mean,
            a.tail_std_err
        );
    }
}

fn run(args: &RunArgs, all: bool) -> Result<()> {
    let cfg = args.scenario()?;
    let results = if all {
        compare(&cfg)?
    } else {
        vec![(cfg.strategy, run_monte_carlo(&cfg)?)]
    };
    write_csv(&cfg.output, &results)?;
    let summary = write_summary(&summary_path(&cfg.output), &cfg, &results)?;
    print_summary(&summary, &cfg.output);
    Ok(())
}

fn equilibria(args: &EquilibriaArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.game).map_err(|source| Error::Io {
        path: args.game.clone(),
        source,
    })?;
    let spec = GameSpec::from_json(&text)?;
    let space: ProfileSpace = args.space.into();
    let all: Vec<StrategyProfile> = enumerate_profiles(&spec, space)?.collect();
    let nash = nash_set(&spec, space)?;
    let mut po = 0;
    for p in &nash {
        if is_pareto_optimal(&spec, p, &all)? {
            po += 1;
        }
    }
    let mut propositions = Vec::new();
    if spec.c >= 0.0 {
        if spec.gain_table.is_case_a() {
            propositions.push(serde_json::to_value(check_proposition(
                &spec,
                Proposition::CaseA,
                space,
            )?)?);
        }
        if spec.gain_table.is_case_b() {
            propositions.push(serde_json::to_value(check_proposition(
                &spec,
                Proposition::CaseB,
                space,
            )?)?);
        }
    }
    let report = json!({
        "space": space,
        "n_profiles": all.len(),
        "case_a": spec.gain_table.is_case_a(),
        "case_b": spec.gain_table.is_case_b(),
        "nash_count": nash.len(),
        "nash_ordered_count": nash.iter().map(StrategyProfile::ordered_assignments).sum::<u128>(),
        "pareto_optimal_nash_count": po,
        "nash": nash.iter().map(|p| &p.s).collect::<Vec<_>>(),
        "propositions": propositions,
    });
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => run(args, false),
        Command::Compare(args) => run(args, true),
        Command::Equilibria(args) => equilibria(args),
        Command::DefaultConfig { out } => default_scenario()
            .to_json()
            .and_then(|text| emit(out.as_deref(), &(text + "\n"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
