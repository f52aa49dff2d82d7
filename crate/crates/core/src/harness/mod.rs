//! Scenario configuration, the closed simulation loop and Monte Carlo
//! aggregation.

mod config;
mod monte_carlo;
mod sim;

pub use config::{
    default_scenario, DynamicsSettings, RadarConfig, RangeFactors, ScenarioConfig,
    CONFIG_SCHEMA_VERSION,
};
pub use monte_carlo::{
    aggregate, compare, run_monte_carlo, run_seed, summary_path, write_csv, write_summary,
    Aggregate, Summary, CSV_HEADER, CSV_SCHEMA_VERSION,
};
pub use sim::{build_radars, live_game, run_once, MetricsLog};
