//! The track-selection game.
//!
//! Radars are players; a strategy is a row of beam counts over targets with
//! at most `m` beams. Every radar receives the same payoff
//!
//! ```text
//! u(s) = Σ_j gain_j(m_j) − c·[m_j = 0]
//! ```
//!
//! where `m_j` is the number of beams (over all radars) on target `j` and
//! `gain_j` is the partial sum of that target's diminishing gain
//! increments. Because payoffs depend only on the column sums, the game is
//! an identical-interest anti-coordination game.

mod oracle;
mod profile;
mod proposition;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use oracle::{
    enumerate_profiles, find_deviation, is_nash, is_pareto_optimal, nash_set, pareto_set,
    profile_count, rows, Deviation, NashCheck, MAX_PROFILES,
};
pub use profile::StrategyProfile;
pub use proposition::{
    check_proposition, greedy_level_fill, Counterexample, Proposition, PropositionReport,
};

/// Utilities closer than this (relative to their magnitude) are treated as
/// equal by the equilibrium and dominance checks.
pub const UTILITY_TOL: f64 = 1e-9;

/// Per-target diminishing gain increments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainTable {
    /// `increments[j][p]` is the gain of the `(p+1)`-th look at target `j`.
    pub increments: Vec<Vec<f64>>,
}

impl GainTable {
    pub fn new(increments: Vec<Vec<f64>>) -> Result<Self> {
        let t = Self { increments };
        t.validate()?;
        Ok(t)
    }

    /// The same increment sequence for every target.
    pub fn uniform(n_targets: usize, increments: &[f64]) -> Result<Self> {
        Self::new(vec![increments.to_vec(); n_targets])
    }

    pub fn validate(&self) -> Result<()> {
        for (j, row) in self.increments.iter().enumerate() {
            if let Some(v) = row.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(Error::invalid(format!(
                    "gain increment {v} for target {j} is negative or not finite"
                )));
            }
        }
        Ok(())
    }

    pub fn n_targets(&self) -> usize {
        self.increments.len()
    }

    /// Shallowest increment sequence over all targets.
    pub fn depth(&self) -> usize {
        self.increments.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Sum of the first `m_t` increments of `target_id`; zero when `m_t == 0`.
    pub fn gain(&self, target_id: usize, m_t: usize) -> Result<f64> {
        let row = self.increments.get(target_id).ok_or(Error::UnknownTarget {
            target_id,
            n_targets: self.n_targets(),
        })?;
        if m_t > row.len() {
            return Err(Error::GainTableDepth {
                target_id,
                depth: row.len(),
                requested: m_t,
            });
        }
        Ok(row[..m_t].iter().sum())
    }

    /// All targets share one increment sequence.
    pub fn is_case_a(&self) -> bool {
        match self.increments.split_first() {
            Some((first, rest)) => rest.iter().all(|r| r == first),
            None => true,
        }
    }

    /// Every level's smallest increment beats the next level's largest.
    pub fn is_case_b(&self) -> bool {
        let depth = self.depth();
        (0..depth.saturating_sub(1)).all(|p| {
            let min_here = self.level(p).fold(f64::INFINITY, f64::min);
            let max_next = self.level(p + 1).fold(f64::NEG_INFINITY, f64::max);
            min_here > max_next
        })
    }

    /// Each target's increments are strictly decreasing.
    pub fn is_strictly_diminishing(&self) -> bool {
        self.increments
            .iter()
            .all(|r| r.windows(2).all(|w| w[0] > w[1]))
    }

    fn level(&self, p: usize) -> impl Iterator<Item = f64> + '_ {
        self.increments.iter().map(move |r| r[p])
    }

    /// Targets ordered from most to least accurate by their first increment,
    /// ties to the lower id.
    pub fn accuracy_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_targets()).collect();
        order.sort_by(|&a, &b| {
            let ga = self.increments[a].first().copied().unwrap_or(0.0);
            let gb = self.increments[b].first().copied().unwrap_or(0.0);
            gb.total_cmp(&ga).then(a.cmp(&b))
        });
        order
    }
}

/// A track-selection game instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub n_radars: usize,
    pub n_targets: usize,
    /// Beams per radar.
    pub m: usize,
    /// Penalty per unobserved target.
    pub c: f64,
    pub gain_table: GainTable,
}

impl GameSpec {
    pub fn new(
        n_radars: usize,
        n_targets: usize,
        m: usize,
        c: f64,
        gain_table: GainTable,
    ) -> Result<Self> {
        let spec = Self {
            n_radars,
            n_targets,
            m,
            c,
            gain_table,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_radars == 0 || self.n_targets == 0 {
            return Err(Error::invalid(
                "game needs at least one radar and one target",
            ));
        }
        if self.m == 0 || self.m >= self.n_targets {
            return Err(Error::invalid(format!(
                "beams per radar must satisfy 1 <= m < n_targets, got m={} n_targets={}",
                self.m, self.n_targets
            )));
        }
        if !self.c.is_finite() {
            return Err(Error::invalid("delay coefficient must be finite"));
        }
        self.gain_table.validate()?;
        if self.gain_table.n_targets() != self.n_targets {
            return Err(Error::invalid(format!(
                "gain table has {} targets, game has {}",
                self.gain_table.n_targets(),
                self.n_targets
            )));
        }
        let need = self.total_beams();
        if self.gain_table.depth() < need {
            return Err(Error::invalid(format!(
                "gain table depth {} is below n_radars*m = {need}",
                self.gain_table.depth()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn total_beams(&self) -> usize {
        self.n_radars * self.m
    }

    /// `⌈|N|·m / |T|⌉`, the coverage level a balanced allocation reaches.
    pub fn top_level(&self) -> usize {
        self.total_beams().div_ceil(self.n_targets)
    }

    /// Payoff for a vector of per-target beam counts.
    pub fn utility_of_counts(&self, counts: &[usize]) -> Result<f64> {
        let mut u = 0.0;
        for (j, &n) in counts.iter().enumerate() {
            u += self.gain_table.gain(j, n)?;
            if n == 0 {
                u -= self.c;
            }
        }
        Ok(u)
    }

    /// Payoff of radar `radar_id` under `profile`.
    pub fn utility(&self, profile: &StrategyProfile, radar_id: usize) -> Result<f64> {
        profile.validate(self)?;
        if radar_id >= self.n_radars {
            return Err(Error::UnknownRadar(radar_id));
        }
        self.utility_of_counts(&profile.column_sums())
    }

    /// Payoffs of all radars.
    pub fn utilities(&self, profile: &StrategyProfile) -> Result<Vec<f64>> {
        (0..self.n_radars)
            .map(|i| self.utility(profile, i))
            .collect()
    }
}

/// Strategy space used by the enumeration oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileSpace {
    /// Every row of non-negative beam counts summing to at most `m`.
    #[default]
    Full,
    /// Rows with exactly `m` beams on `m` distinct targets.
    Distinct,
}

pub(crate) fn strictly_greater(a: f64, b: f64) -> bool {
    a - b > UTILITY_TOL * a.abs().max(b.abs()).max(1.0)
}
