use trackselect::harness::{
    compare, default_scenario, run_monte_carlo, run_once, run_seed, summary_path, write_csv,
    write_summary, RangeFactors, CSV_HEADER,
};
use trackselect::{ScenarioConfig, StrategyKind};

fn short(kind: StrategyKind) -> ScenarioConfig {
    ScenarioConfig {
        strategy: kind,
        horizon: 60,
        n_runs: 4,
        ..default_scenario()
    }
}

#[test]
fn beam_budget_is_respected() {
    for kind in StrategyKind::ALL {
        let log = run_once(&short(kind), run_seed(7, 0)).unwrap();
        for (slot, p) in log.profiles.iter().enumerate() {
            assert!(p.row_sums().iter().all(|&r| r <= 2), "{kind} slot {slot}");
            assert_eq!(log.measurements[slot], p.row_sums().iter().sum::<usize>());
            if matches!(
                kind,
                StrategyKind::Standalone | StrategyKind::BestResponse | StrategyKind::Centralized
            ) && slot >= 1
            {
                assert!(p.row_sums().iter().all(|&r| r == 2), "{kind} slot {slot}");
            }
        }
        assert!(log.trace_sum.iter().all(|&t| t > 0.0 && t.is_finite()));
    }
}

#[test]
fn sharing_radars_hold_identical_tracks() {
    for kind in StrategyKind::ALL
        .into_iter()
        .filter(StrategyKind::shares_measurements)
    {
        let log = run_once(&short(kind), run_seed(3, 1)).unwrap();
        assert!(log.tracks_identical, "{kind}");
    }
}

#[test]
fn runs_are_determined_by_their_seed() {
    let a = run_once(&short(StrategyKind::Centralized), run_seed(5, 2)).unwrap();
    let b = run_once(&short(StrategyKind::Centralized), run_seed(5, 2)).unwrap();
    assert_eq!(a, b);
    let c = run_once(&short(StrategyKind::Centralized), run_seed(5, 3)).unwrap();
    assert_ne!(a.trace_sum, c.trace_sum);
}

#[test]
fn fixed_range_factors_are_used() {
    let mut cfg = short(StrategyKind::BestResponse);
    cfg.range_factors = RangeFactors::Matrix(vec![vec![1.0; 5]; 3]);
    let good = run_once(&cfg, 1).unwrap();
    cfg.range_factors = RangeFactors::Matrix(vec![vec![4.5; 5]; 3]);
    let poor = run_once(&cfg, 1).unwrap();
    let tail = |v: &[f64]| v[30..].iter().sum::<f64>();
    assert!(tail(&good.trace_sum) < tail(&poor.trace_sum));
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("trackselect-harness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scenario.json");
    let cfg = short(StrategyKind::RandomK);
    std::fs::write(&path, cfg.to_json().unwrap()).unwrap();
    assert_eq!(ScenarioConfig::load(&path).unwrap(), cfg);
    assert!(ScenarioConfig::load(&dir.join("missing.json")).is_err());
    std::fs::write(&path, "{\"schema_version\": 1}").unwrap();
    assert!(ScenarioConfig::load(&path).is_err());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn compare_writes_every_strategy() {
    let dir = std::env::temp_dir().join(format!("trackselect-compare-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = ScenarioConfig {
        horizon: 8,
        n_runs: 3,
        ..default_scenario()
    };
    let results = compare(&cfg).unwrap();
    let path = dir.join("cmp.csv");
    write_csv(&path, &results).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), 1 + 5 * 3 * 8);
    for kind in StrategyKind::ALL {
        assert!(text.contains(&format!(",{kind},")));
    }
    let summary = write_summary(&summary_path(&path), &cfg, &results).unwrap();
    assert_eq!(summary.strategies.len(), 5);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(summary_path(&path)).unwrap()).unwrap();
    assert_eq!(json["csv_schema_version"], 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn strategy_matches_single_runs() {
    let cfg = short(StrategyKind::RandomSlot);
    let logs = run_monte_carlo(&cfg).unwrap();
    for (r, log) in logs.iter().enumerate() {
        assert_eq!(
            log,
            &run_once(&cfg, run_seed(cfg.master_seed, r as u64)).unwrap()
        );
    }
}
