use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{DynamicsConfig, RankMode, StrategyKind};
use crate::error::{Error, Result};
use crate::kinematics::{MotionModel, TargetState};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    /// Position in km.
    pub x: f64,
    pub y: f64,
    /// Beams per scan.
    pub m: usize,
    /// Azimuth standard deviation (rad).
    pub sigma_a: f64,
    /// Base range standard deviation (km).
    pub sigma_r_base: f64,
}

/// Per-(radar, target) range-accuracy factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeFactors {
    /// Drawn i.i.d. uniform on `[lo, hi]` once per realization.
    Interval([f64; 2]),
    /// Fixed matrix, one row per radar and one column per target.
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSettings {
    pub alpha: f64,
    pub k_reinit: u64,
    #[serde(default)]
    pub rank_mode: RankMode,
}

impl DynamicsSettings {
    pub fn with_seed(&self, seed: u64) -> DynamicsConfig {
        DynamicsConfig {
            alpha: self.alpha,
            k_reinit: self.k_reinit,
            seed,
            rank_mode: self.rank_mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub radars: Vec<RadarConfig>,
    pub range_factors: RangeFactors,
    /// Initial true states `[x, y, vx, vy]` (km, km/s).
    pub targets: Vec<[f64; 4]>,
    /// Diagonal of the initial error covariance.
    pub p0_diag: [f64; 4],
    pub t_u: f64,
    pub sigma_w_sq: f64,
    /// Penalty per unobserved target in the selection utility.
    pub c: f64,
    /// Number of slots per realization.
    pub horizon: u64,
    pub n_runs: u64,
    pub dynamics: DynamicsSettings,
    pub strategy: StrategyKind,
    pub output: PathBuf,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        default_scenario()
    }
}

/// Three radars on the x axis, two beams each, five targets.
pub fn default_scenario() -> ScenarioConfig {
    let radar = |x: f64| RadarConfig {
        x,
        y: 0.0,
        m: 2,
        sigma_a: 0.002,
        sigma_r_base: 0.015,
    };
    ScenarioConfig {
        schema_version: CONFIG_SCHEMA_VERSION,
        radars: vec![radar(-10.0), radar(3.0), radar(10.0)],
        range_factors: RangeFactors::Interval([1.0, 4.5]),
        targets: vec![
            [1.0, 6.0, 0.5, 0.1],
            [0.5, 7.0, 0.35, -0.1],
            [1.5, 3.0, -0.3, 0.0],
            [2.0, 4.0, -0.2, 0.1],
            [2.5, 5.0, 0.3, 0.2],
        ],
        p0_diag: [0.1 * 0.1; 4],
        t_u: 0.25,
        sigma_w_sq: 2.5e-5,
        c: 0.1,
        horizon: 240,
        n_runs: 100,
        dynamics: DynamicsSettings {
            alpha: 0.4,
            k_reinit: 10,
            rank_mode: RankMode::Live,
        },
        strategy: StrategyKind::BestResponse,
        output: PathBuf::from("metrics.csv"),
        master_seed: 2016,
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn n_radars(&self) -> usize {
        self.radars.len()
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    /// Beams per radar (common to all radars).
    pub fn m(&self) -> usize {
        self.radars.first().map_or(0, |r| r.m)
    }

    pub fn motion_model(&self) -> Result<MotionModel> {
        MotionModel::new(self.t_u, self.sigma_w_sq)
    }

    pub fn initial_states(&self) -> Vec<TargetState> {
        self.targets.iter().map(|&t| TargetState::from(t)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::invalid(format!(
                "unsupported config schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.radars.is_empty() {
            return Err(Error::invalid("scenario needs at least one radar"));
        }
        if self.targets.len() < 2 {
            return Err(Error::invalid("scenario needs at least two targets"));
        }
        let m = self.m();
        if self.radars.iter().any(|r| r.m != m) {
            return Err(Error::invalid(
                "all radars must have the same beam budget m",
            ));
        }
        if m == 0 || m >= self.n_targets() {
            return Err(Error::invalid(format!(
                "beams per radar must satisfy 1 <= m < n_targets, got m={m}"
            )));
        }
        for (i, r) in self.radars.iter().enumerate() {
            if !(r.sigma_a > 0.0 && r.sigma_r_base > 0.0) {
                return Err(Error::invalid(format!(
                    "radar {i}: noise standard deviations must be positive"
                )));
            }
        }
        for t in &self.targets {
            TargetState::new(t[0], t[1], t[2], t[3])?;
        }
        if !self.p0_diag.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(Error::invalid("p0_diag entries must be positive"));
        }
        self.motion_model()?;
        if !self.c.is_finite() {
            return Err(Error::invalid("c must be finite"));
        }
        if self.horizon == 0 || self.n_runs == 0 {
            return Err(Error::invalid("horizon and n_runs must be >= 1"));
        }
        self.dynamics.with_seed(0).validate()?;
        match &self.range_factors {
            RangeFactors::Interval([lo, hi]) => {
                if !(*lo >= 1.0 && hi >= lo && hi.is_finite()) {
                    return Err(Error::invalid(format!(
                        "range factor interval [{lo}, {hi}] must satisfy 1 <= lo <= hi"
                    )));
                }
            }
            RangeFactors::Matrix(rows) => {
                if rows.len() != self.n_radars() || rows.iter().any(|r| r.len() != self.n_targets())
                {
                    return Err(Error::invalid(
                        "range factor matrix must be n_radars x n_targets",
                    ));
                }
                if rows.iter().flatten().any(|b| !(*b >= 1.0 && b.is_finite())) {
                    return Err(Error::invalid("range factors must be >= 1"));
                }
            }
        }
        Ok(())
    }
}
