//! Distributed best-response track selection and the baseline strategies it
//! is compared against.
//!
//! Each slot every radar sees the per-target beam counts broadcast in the
//! previous slot and, independently of the others, applies:
//!
//! 1. spread repeated beams (and any idle beam) onto the least-covered
//!    targets it does not already hold;
//! 2. with probability `alpha`, move one beam, either off an over-covered
//!    target (above the balanced level `⌈|N|·m/|T|⌉`, or two or more beams
//!    above some outside target) onto the most accurate least-covered
//!    outside target, or from its most-covered target onto a
//!    least-covered one that is exactly one beam lower and more accurate;
//! 3. announce the new selection.
//!
//! Selections are redrawn uniformly every `k_reinit` slots.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{rows, ProfileSpace, StrategyProfile, MAX_PROFILES};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMode {
    /// First-look gain increments recomputed from the live tracks each slot.
    #[default]
    Live,
    /// Fixed per-radar accuracy from the sensor noise model.
    Static,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Probability of attempting a rebalancing move each slot.
    pub alpha: f64,
    /// Selections are redrawn every `k_reinit` slots.
    pub k_reinit: u64,
    pub seed: u64,
    #[serde(default)]
    pub rank_mode: RankMode,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            k_reinit: 10,
            seed: 0,
            rank_mode: RankMode::Live,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.k_reinit == 0 {
            return Err(Error::invalid("k_reinit must be >= 1"));
        }
        Ok(())
    }
}

/// Sizes shared by every radar's decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameContext {
    pub n_radars: usize,
    pub n_targets: usize,
    pub m: usize,
}

impl GameContext {
    pub fn balanced_level(&self) -> usize {
        (self.n_radars * self.m).div_ceil(self.n_targets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadarDecisionState {
    pub radar_id: usize,
    /// Selected targets with repeats, ascending.
    pub selected: Vec<usize>,
    /// Per-target beam counts from the last broadcast this radar acted on.
    pub last_known_counts: Vec<usize>,
}

impl RadarDecisionState {
    pub fn new(radar_id: usize, mut selected: Vec<usize>) -> Self {
        selected.sort_unstable();
        Self {
            radar_id,
            selected,
            last_known_counts: Vec::new(),
        }
    }

    /// `m` distinct targets drawn uniformly.
    pub fn random(radar_id: usize, ctx: &GameContext, rng: &mut impl Rng) -> Self {
        Self::new(radar_id, random_selection(ctx, rng))
    }

    fn holds(&self, j: usize) -> bool {
        self.selected.contains(&j)
    }

    fn multiplicity(&self, j: usize) -> usize {
        self.selected.iter().filter(|&&t| t == j).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// An idle beam put to use.
    Fill,
    /// A repeated beam spread to another target.
    Dedup,
    /// A beam taken off an over-covered target.
    OverCovered,
    /// A beam swapped to a more accurate target one level lower.
    AccuracySwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamMove {
    pub kind: MoveKind,
    /// Source target (`None` for an idle beam).
    pub from: Option<usize>,
    pub to: usize,
}

/// One radar's best-response update. See the module docs for the rule.
pub fn best_response_step(
    state: &RadarDecisionState,
    counts: &[usize],
    accuracy: &[f64],
    ctx: &GameContext,
    cfg: &DynamicsConfig,
    rng: &mut impl Rng,
) -> RadarDecisionState {
    best_response_step_with_moves(state, counts, accuracy, ctx, cfg, rng).0
}

/// [`best_response_step`] also returning the moves it made, in order.
pub fn best_response_step_with_moves(
    state: &RadarDecisionState,
    counts: &[usize],
    accuracy: &[f64],
    ctx: &GameContext,
    cfg: &DynamicsConfig,
    rng: &mut impl Rng,
) -> (RadarDecisionState, Vec<BeamMove>) {
    let mut next = state.clone();
    next.last_known_counts = counts.to_vec();
    let mut counts = counts.to_vec();
    let mut moves = Vec::new();

    // Bullet 1: idle beams, then repeated beams, go to the least-covered
    // target not already held.
    while next.selected.len() < ctx.m {
        let Some(l) = least_covered_outside(&next, &counts, None) else {
            break;
        };
        next.selected.push(l);
        counts[l] += 1;
        moves.push(BeamMove {
            kind: MoveKind::Fill,
            from: None,
            to: l,
        });
    }
    while let Some(j) = worst_duplicate(&next) {
        let Some(l) = least_covered_outside(&next, &counts, None) else {
            break;
        };
        move_beam(&mut next, &mut counts, j, l);
        moves.push(BeamMove {
            kind: MoveKind::Dedup,
            from: Some(j),
            to: l,
        });
    }

    // Bullet 2, at most one move.
    let draw: f64 = rng.gen();
    if draw < cfg.alpha {
        if let Some(m) = rebalancing_move(&next, &counts, accuracy, ctx) {
            move_beam(
                &mut next,
                &mut counts,
                m.from.expect("rebalancing moves have a source"),
                m.to,
            );
            moves.push(m);
        }
    }

    next.selected.sort_unstable();
    (next, moves)
}

/// Whether the rule would change nothing for this radar whatever the draw.
pub fn is_stationary(
    state: &RadarDecisionState,
    counts: &[usize],
    accuracy: &[f64],
    ctx: &GameContext,
) -> bool {
    let always = DynamicsConfig {
        alpha: 1.0,
        ..DynamicsConfig::default()
    };
    let mut rng = seed::rng(0, &[]);
    best_response_step_with_moves(state, counts, accuracy, ctx, &always, &mut rng)
        .1
        .is_empty()
}

fn rebalancing_move(
    state: &RadarDecisionState,
    counts: &[usize],
    accuracy: &[f64],
    ctx: &GameContext,
) -> Option<BeamMove> {
    // Over-covered own target: above the balanced level, or at least two
    // beams above some outside target. Highest count first, then lowest id.
    let level = ctx.balanced_level();
    let l = least_covered_outside(state, counts, Some(accuracy))?;
    let over = unique(&state.selected)
        .filter(|&j| counts[j] > level || counts[j] > counts[l] + 1)
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)));
    if let Some(j) = over {
        if counts[l] + 1 < counts[j] {
            return Some(BeamMove {
                kind: MoveKind::OverCovered,
                from: Some(j),
                to: l,
            });
        }
    }

    // Gap-1 accuracy swap: own most-covered target (least accurate on ties)
    // against the most accurate least-covered outside target.
    let j = unique(&state.selected).max_by(|&a, &b| {
        counts[a]
            .cmp(&counts[b])
            .then(accuracy[b].total_cmp(&accuracy[a]))
            .then(b.cmp(&a))
    })?;
    (counts[j] == counts[l] + 1 && accuracy[l] > accuracy[j]).then_some(BeamMove {
        kind: MoveKind::AccuracySwap,
        from: Some(j),
        to: l,
    })
}

fn unique(selected: &[usize]) -> impl Iterator<Item = usize> + '_ {
    selected
        .iter()
        .enumerate()
        .filter(|(k, j)| *k == 0 || selected[k - 1] != **j)
        .map(|(_, &j)| j)
}

/// Own target with the most repeated beams, lowest id on ties.
fn worst_duplicate(state: &RadarDecisionState) -> Option<usize> {
    let mut sorted = state.selected.clone();
    sorted.sort_unstable();
    unique(&sorted)
        .map(|j| (j, state.multiplicity(j)))
        .filter(|&(_, n)| n > 1)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(j, _)| j)
}

/// Least-covered target not held by `state`; among ties the most accurate
/// (when ranks are given), then the lowest id.
fn least_covered_outside(
    state: &RadarDecisionState,
    counts: &[usize],
    accuracy: Option<&[f64]>,
) -> Option<usize> {
    (0..counts.len())
        .filter(|&q| !state.holds(q))
        .min_by(|&a, &b| {
            let by_acc =
                accuracy.map_or(std::cmp::Ordering::Equal, |acc| acc[b].total_cmp(&acc[a]));
            counts[a].cmp(&counts[b]).then(by_acc).then(a.cmp(&b))
        })
}

fn move_beam(state: &mut RadarDecisionState, counts: &mut [usize], from: usize, to: usize) {
    let pos = state
        .selected
        .iter()
        .position(|&t| t == from)
        .expect("moved beam is held");
    state.selected[pos] = to;
    counts[from] -= 1;
    counts[to] += 1;
}

fn random_selection(ctx: &GameContext, rng: &mut impl Rng) -> Vec<usize> {
    let mut s = sample(rng, ctx.n_targets, ctx.m.min(ctx.n_targets)).into_vec();
    s.sort_unstable();
    s
}

pub fn profile_of(network: &[RadarDecisionState], n_targets: usize) -> StrategyProfile {
    let selections: Vec<Vec<usize>> = network.iter().map(|r| r.selected.clone()).collect();
    StrategyProfile::from_selections(n_targets, &selections)
        .expect("selections index valid targets")
}

/// Every radar is stationary under the counts of the current profile.
pub fn is_fixed_point(
    network: &[RadarDecisionState],
    accuracy: &[Vec<f64>],
    ctx: &GameContext,
) -> bool {
    let counts = profile_of(network, ctx.n_targets).column_sums();
    network
        .iter()
        .all(|r| is_stationary(r, &counts, &accuracy[r.radar_id], ctx))
}

/// Per-radar random streams for a dynamics run.
pub fn radar_rngs(run_seed: u64, n_radars: usize) -> Vec<ChaCha8Rng> {
    (0..n_radars as u64)
        .map(|i| seed::rng(run_seed, &[seed::RADAR, i]))
        .collect()
}

/// Simulate the best-response rule under fixed accuracy ranks for `slots`
/// slots (the first entry of the trajectory is the initial profile).
///
/// All radars act simultaneously on the previous slot's counts; every
/// `k_reinit` slots each radar redraws its selection from its own stream.
pub fn run_dynamics(
    network: &[RadarDecisionState],
    accuracy: &[Vec<f64>],
    ctx: &GameContext,
    cfg: &DynamicsConfig,
    slots: u64,
) -> Vec<StrategyProfile> {
    let mut rngs = radar_rngs(cfg.seed, network.len());
    let mut current = network.to_vec();
    let mut out = Vec::with_capacity(slots as usize);
    if slots == 0 {
        return out;
    }
    out.push(profile_of(&current, ctx.n_targets));
    for t in 1..slots {
        let counts = profile_of(&current, ctx.n_targets).column_sums();
        current = current
            .iter()
            .zip(rngs.iter_mut())
            .map(|(r, rng)| {
                if t % cfg.k_reinit == 0 {
                    RadarDecisionState::random(r.radar_id, ctx, rng)
                } else {
                    best_response_step(r, &counts, &accuracy[r.radar_id], ctx, cfg, rng)
                }
            })
            .collect();
        out.push(profile_of(&current, ctx.n_targets));
    }
    out
}

/// Track-selection strategies compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// (a) No sharing; each radar cycles through the targets in id order.
    Standalone,
    /// (b) Shared measurements; random distinct selections redrawn every K slots.
    RandomK,
    /// (c) Shared measurements; random distinct selections every slot.
    RandomSlot,
    /// (d) Shared measurements; distributed best response.
    BestResponse,
    /// (e) Shared measurements; exhaustive utility maximisation every K slots.
    Centralized,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Standalone,
        StrategyKind::RandomK,
        StrategyKind::RandomSlot,
        StrategyKind::BestResponse,
        StrategyKind::Centralized,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Standalone => "standalone",
            StrategyKind::RandomK => "random-k",
            StrategyKind::RandomSlot => "random-slot",
            StrategyKind::BestResponse => "best-response",
            StrategyKind::Centralized => "centralized",
        }
    }

    /// Radars exchange their measurements.
    pub fn shares_measurements(&self) -> bool {
        !matches!(self, StrategyKind::Standalone)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "standalone" | "a" => StrategyKind::Standalone,
            "random-k" | "b" => StrategyKind::RandomK,
            "random-slot" | "c" => StrategyKind::RandomSlot,
            "best-response" | "d" => StrategyKind::BestResponse,
            "centralized" | "e" => StrategyKind::Centralized,
            other => return Err(Error::UnknownStrategy(other.to_string())),
        })
    }
}

/// What a selection strategy may ask about the current slot.
pub trait SlotOracle {
    /// Accuracy rank of `target` as seen by `radar` (larger is better).
    fn accuracy(&self, radar: usize, target: usize) -> f64;
    /// Common payoff of a profile, evaluated on the current predictions.
    fn utility(&self, profile: &StrategyProfile) -> f64;
}

/// Stateful per-slot selector for one strategy.
pub struct Selector {
    kind: StrategyKind,
    ctx: GameContext,
    cfg: DynamicsConfig,
    rngs: Vec<ChaCha8Rng>,
    network: Vec<RadarDecisionState>,
    candidates: Vec<StrategyProfile>,
}

impl Selector {
    pub fn new(
        kind: StrategyKind,
        ctx: GameContext,
        cfg: DynamicsConfig,
        run_seed: u64,
    ) -> Result<Self> {
        cfg.validate()?;
        if ctx.m == 0 || ctx.m >= ctx.n_targets {
            return Err(Error::invalid("selector needs 1 <= m < n_targets"));
        }
        let candidates = if kind == StrategyKind::Centralized {
            distinct_profiles(&ctx)?
        } else {
            Vec::new()
        };
        Ok(Self {
            kind,
            ctx,
            cfg,
            rngs: radar_rngs(seed::derive(run_seed, &[seed::SELECT]), ctx.n_radars),
            network: (0..ctx.n_radars)
                .map(|i| RadarDecisionState::new(i, Vec::new()))
                .collect(),
            candidates,
        })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    /// Number of profiles the centralized search scores per decision epoch.
    pub fn search_space(&self) -> usize {
        self.candidates.len()
    }

    pub fn select(&mut self, slot: u64, oracle: &dyn SlotOracle) -> StrategyProfile {
        let ctx = self.ctx;
        let epoch = slot.is_multiple_of(self.cfg.k_reinit);
        match self.kind {
            StrategyKind::Standalone => {
                let sel: Vec<usize> = (0..ctx.m)
                    .map(|b| (slot as usize * ctx.m + b) % ctx.n_targets)
                    .collect();
                for r in &mut self.network {
                    *r = RadarDecisionState::new(r.radar_id, sel.clone());
                }
            }
            StrategyKind::RandomK | StrategyKind::RandomSlot => {
                if epoch || self.kind == StrategyKind::RandomSlot {
                    self.redraw();
                }
            }
            StrategyKind::BestResponse => {
                if epoch {
                    self.redraw();
                } else {
                    let counts = profile_of(&self.network, ctx.n_targets).column_sums();
                    let cfg = self.cfg;
                    self.network = self
                        .network
                        .iter()
                        .zip(self.rngs.iter_mut())
                        .map(|(r, rng)| {
                            let acc: Vec<f64> = (0..ctx.n_targets)
                                .map(|j| oracle.accuracy(r.radar_id, j))
                                .collect();
                            best_response_step(r, &counts, &acc, &ctx, &cfg, rng)
                        })
                        .collect();
                }
            }
            StrategyKind::Centralized => {
                if epoch {
                    let mut best: Option<(f64, &StrategyProfile)> = None;
                    for p in &self.candidates {
                        let u = oracle.utility(p);
                        if best.is_none_or(|(b, _)| u > b) {
                            best = Some((u, p));
                        }
                    }
                    let best = best.expect("candidate set is non-empty").1.clone();
                    for r in &mut self.network {
                        *r = RadarDecisionState::new(r.radar_id, best.selection(r.radar_id));
                    }
                }
            }
        }
        profile_of(&self.network, ctx.n_targets)
    }

    fn redraw(&mut self) {
        let ctx = self.ctx;
        for (r, rng) in self.network.iter_mut().zip(self.rngs.iter_mut()) {
            *r = RadarDecisionState::random(r.radar_id, &ctx, rng);
        }
    }
}

/// Profiles in which every radar points its `m` beams at distinct targets.
pub fn distinct_profiles(ctx: &GameContext) -> Result<Vec<StrategyProfile>> {
    let rs = rows(ProfileSpace::Distinct, ctx.n_targets, ctx.m);
    let total = (rs.len() as u128).checked_pow(ctx.n_radars as u32);
    match total {
        Some(n) if n <= MAX_PROFILES => {}
        other => {
            return Err(Error::InstanceTooLarge {
                count: other.unwrap_or(u128::MAX),
                limit: MAX_PROFILES,
            })
        }
    }
    let mut out = vec![Vec::new()];
    for _ in 0..ctx.n_radars {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<u32>>| {
                rs.iter().map(move |r| {
                    let mut p = prefix.clone();
                    p.push(r.clone());
                    p
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(StrategyProfile::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    const CTX: GameContext = GameContext {
        n_radars: 3,
        n_targets: 5,
        m: 2,
    };

    fn cfg(alpha: f64) -> DynamicsConfig {
        DynamicsConfig {
            alpha,
            k_reinit: 10,
            seed: 1,
            rank_mode: RankMode::Live,
        }
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn duplicate_spreads_to_least_covered() {
        let s = RadarDecisionState::new(0, vec![0, 0]);
        let counts = [3, 1, 0, 1, 1];
        let acc = [1.0; 5];
        let (next, moves) =
            best_response_step_with_moves(&s, &counts, &acc, &CTX, &cfg(0.0), &mut rng());
        assert_eq!(next.selected, vec![0, 2]);
        assert_eq!(next.last_known_counts, counts.to_vec());
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].kind, MoveKind::Dedup);
    }

    #[test]
    fn idle_beams_are_filled() {
        let s = RadarDecisionState::new(0, vec![3]);
        let next = best_response_step(&s, &[1, 1, 0, 2, 1], &[1.0; 5], &CTX, &cfg(0.0), &mut rng());
        assert_eq!(next.selected, vec![2, 3]);
    }

    #[test]
    fn alpha_zero_only_deduplicates() {
        let s = RadarDecisionState::new(0, vec![0, 1]);
        let counts = [3, 1, 1, 0, 1];
        let mut r = rng();
        for _ in 0..100 {
            let (next, moves) =
                best_response_step_with_moves(&s, &counts, &[1.0; 5], &CTX, &cfg(0.0), &mut r);
            assert!(moves.is_empty());
            assert_eq!(next.selected, s.selected);
        }
    }

    #[test]
    fn over_covered_beam_moves_to_unique_argmin() {
        let s = RadarDecisionState::new(0, vec![0, 1]);
        let counts = [3, 1, 1, 0, 1];
        let (next, moves) = best_response_step_with_moves(
            &s,
            &counts,
            &[1.0, 2.0, 3.0, 0.5, 4.0],
            &CTX,
            &cfg(1.0),
            &mut rng(),
        );
        assert_eq!(next.selected, vec![1, 3]);
        assert_eq!(moves[0].kind, MoveKind::OverCovered);
    }

    #[test]
    fn two_level_gap_at_balanced_level_is_closed() {
        // No count exceeds the balanced level 2, but target 3 is uncovered.
        let s = RadarDecisionState::new(0, vec![2, 4]);
        let counts = [2, 1, 2, 0, 1];
        let (next, moves) =
            best_response_step_with_moves(&s, &counts, &[1.0; 5], &CTX, &cfg(1.0), &mut rng());
        assert_eq!(next.selected, vec![3, 4]);
        assert_eq!(moves[0].kind, MoveKind::OverCovered);
    }

    #[test]
    fn over_covered_picks_most_accurate_among_ties() {
        let s = RadarDecisionState::new(0, vec![0, 1]);
        let counts = [3, 1, 0, 0, 2];
        let acc = [1.0, 1.0, 0.2, 0.9, 1.0];
        let next = best_response_step(&s, &counts, &acc, &CTX, &cfg(1.0), &mut rng());
        assert_eq!(next.selected, vec![1, 3]);
    }

    #[test]
    fn accuracy_swap_needs_gap_one_and_better_accuracy() {
        let s = RadarDecisionState::new(0, vec![0, 1]);
        let counts = [2, 1, 1, 1, 1];
        // Target 2 is the most accurate outside one; 0 (count 2) is the
        // most covered own target.
        let acc = [0.5, 0.7, 0.9, 0.1, 0.2];
        let (next, moves) =
            best_response_step_with_moves(&s, &counts, &acc, &CTX, &cfg(1.0), &mut rng());
        assert_eq!(moves[0].kind, MoveKind::AccuracySwap);
        assert_eq!(next.selected, vec![1, 2]);

        let acc = [0.95, 0.7, 0.9, 0.1, 0.2];
        assert!(is_stationary(&s, &counts, &acc, &CTX));
    }

    #[test]
    fn single_radar_settles_on_most_accurate_targets() {
        let ctx = GameContext {
            n_radars: 1,
            n_targets: 5,
            m: 2,
        };
        let acc = vec![vec![0.1, 0.5, 0.9, 0.3, 0.8]];
        let start = vec![RadarDecisionState::new(0, vec![0, 3])];
        let traj = run_dynamics(
            &start,
            &acc,
            &ctx,
            &DynamicsConfig {
                alpha: 1.0,
                k_reinit: 1000,
                seed: 3,
                ..cfg(1.0)
            },
            10,
        );
        let top = StrategyProfile::from_selections(5, &[vec![2, 4]]).unwrap();
        assert_eq!(traj[ctx.m], top);
        assert!(traj[ctx.m..].iter().all(|p| *p == top));
    }

    #[test]
    fn alpha_zero_balanced_start_is_constant() {
        let start: Vec<_> = [vec![0, 1], vec![2, 3], vec![4, 0]]
            .into_iter()
            .enumerate()
            .map(|(i, s)| RadarDecisionState::new(i, s))
            .collect();
        let acc = vec![vec![1.0, 0.5, 0.9, 0.3, 0.8]; 3];
        let traj = run_dynamics(
            &start,
            &acc,
            &CTX,
            &DynamicsConfig {
                k_reinit: 1000,
                ..cfg(0.0)
            },
            50,
        );
        assert!(traj.iter().all(|p| *p == traj[0]));
    }

    #[test]
    fn over_covered_moves_reduce_potential() {
        let mut r = rng();
        for _ in 0..2_000 {
            let sel: Vec<usize> = (0..2).map(|_| r.gen_range(0..5)).collect();
            let s = RadarDecisionState::new(0, sel.clone());
            let mut counts = vec![0usize; 5];
            for &j in &sel {
                counts[j] += 1;
            }
            for _ in 0..4 {
                counts[r.gen_range(0..5)] += 1;
            }
            let acc: Vec<f64> = (0..5).map(|_| r.gen()).collect();
            let (_, moves) =
                best_response_step_with_moves(&s, &counts, &acc, &CTX, &cfg(1.0), &mut r);
            let mut c = counts.clone();
            for m in moves {
                let phi_before: usize = c.iter().map(|v| v * v).sum();
                if let Some(f) = m.from {
                    c[f] -= 1;
                }
                c[m.to] += 1;
                let phi_after: usize = c.iter().map(|v| v * v).sum();
                if m.kind == MoveKind::OverCovered {
                    assert!(phi_after < phi_before);
                }
            }
        }
    }

    #[test]
    fn dedup_leaves_no_repeats() {
        let mut r = rng();
        for _ in 0..1_000 {
            let sel: Vec<usize> = (0..2).map(|_| r.gen_range(0..5)).collect();
            let mut counts: Vec<usize> = (0..5).map(|_| r.gen_range(0..3)).collect();
            for &j in &sel {
                counts[j] += 1;
            }
            let s = RadarDecisionState::new(0, sel);
            let next = best_response_step(&s, &counts, &[1.0; 5], &CTX, &cfg(0.0), &mut r);
            let mut d = next.selected.clone();
            d.dedup();
            assert_eq!(d.len(), 2);
        }
    }

    #[test]
    fn trajectories_are_reproducible() {
        let start: Vec<_> = (0..3)
            .map(|i| RadarDecisionState::new(i, vec![0, 0]))
            .collect();
        let acc = vec![vec![1.0, 0.5, 0.9, 0.3, 0.8]; 3];
        let a = run_dynamics(&start, &acc, &CTX, &cfg(0.4), 60);
        let b = run_dynamics(&start, &acc, &CTX, &cfg(0.4), 60);
        assert_eq!(a, b);
        let c = run_dynamics(
            &start,
            &acc,
            &CTX,
            &DynamicsConfig {
                seed: 2,
                ..cfg(0.4)
            },
            60,
        );
        assert_ne!(a, c);
    }

    struct Flat;
    impl SlotOracle for Flat {
        fn accuracy(&self, _: usize, target: usize) -> f64 {
            target as f64
        }
        fn utility(&self, p: &StrategyProfile) -> f64 {
            p.column_sums().iter().filter(|&&n| n > 0).count() as f64
        }
    }

    #[test]
    fn standalone_round_robin() {
        let mut sel = Selector::new(StrategyKind::Standalone, CTX, cfg(0.4), 0).unwrap();
        let picks: Vec<Vec<usize>> = (0..4).map(|t| sel.select(t, &Flat).selection(0)).collect();
        assert_eq!(picks, vec![vec![0, 1], vec![2, 3], vec![0, 4], vec![1, 2]]);
        let p = sel.select(7, &Flat);
        assert!(p.s.iter().all(|r| r == &p.s[0]));
    }

    #[test]
    fn random_k_holds_between_epochs() {
        let mut sel = Selector::new(StrategyKind::RandomK, CTX, cfg(0.4), 5).unwrap();
        let first = sel.select(0, &Flat);
        for t in 1..10 {
            assert_eq!(sel.select(t, &Flat), first);
        }
        let all_same = (10..60).step_by(10).all(|t| sel.select(t, &Flat) == first);
        assert!(!all_same);
    }

    #[test]
    fn random_slot_column_sums_follow_uniform_selection() {
        let mut sel = Selector::new(StrategyKind::RandomSlot, CTX, cfg(0.4), 9).unwrap();
        let slots = 10_000;
        let mut totals = [0f64; 5];
        // Per slot a target is held by Binomial(3, 2/5) radars.
        let mut per_slot = [0f64; 4];
        for t in 0..slots {
            let p = sel.select(t, &Flat);
            assert!(p.is_full(2) && p.is_duplicate_free());
            for (j, n) in p.column_sums().into_iter().enumerate() {
                totals[j] += n as f64;
                per_slot[n] += 1.0;
            }
        }
        let expected_total = slots as f64 * 6.0 / 5.0;
        let chi_total: f64 = totals
            .iter()
            .map(|o| (o - expected_total).powi(2) / expected_total)
            .sum();
        // chi-square 0.99 quantile with 4 degrees of freedom
        assert!(chi_total < 13.2767, "chi2 {chi_total}");

        let n = slots as f64 * 5.0;
        let p = 0.4f64;
        let binom = [
            (1.0 - p).powi(3),
            3.0 * p * (1.0 - p).powi(2),
            3.0 * p * p * (1.0 - p),
            p.powi(3),
        ];
        let chi_slot: f64 = per_slot
            .iter()
            .zip(binom)
            .map(|(o, q)| (o - n * q).powi(2) / (n * q))
            .sum();
        // Targets within a slot are dependent, so the statistic is only a
        // loose check; 0.99 quantile with 3 degrees of freedom, doubled.
        assert!(chi_slot < 2.0 * 11.3449, "chi2 {chi_slot}");
    }

    #[test]
    fn centralized_searches_distinct_profiles() {
        let mut sel = Selector::new(StrategyKind::Centralized, CTX, cfg(0.4), 0).unwrap();
        assert_eq!(sel.search_space(), 1000);
        let p = sel.select(0, &Flat);
        assert!(p.column_sums().iter().all(|&n| n > 0));
        for t in 1..10 {
            assert_eq!(sel.select(t, &Flat), p);
        }
    }

    #[test]
    fn strategy_names_parse() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert_eq!(
            "d".parse::<StrategyKind>().unwrap(),
            StrategyKind::BestResponse
        );
        assert!("greedy".parse::<StrategyKind>().is_err());
    }
}
