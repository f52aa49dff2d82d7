use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::config::{RangeFactors, ScenarioConfig};
use crate::dynamics::{GameContext, RankMode, Selector, SlotOracle, StrategyKind};
use crate::error::Result;
use crate::game::{GainTable, GameSpec, StrategyProfile};
use crate::seed;
use crate::sensing::{Measurement, RadarSite};
use crate::tracker::{gain_increments, Track};

/// One realization's per-slot record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsLog {
    pub strategy: StrategyKind,
    pub run_seed: u64,
    /// `Σ_j tr(P_j)` after each slot's update (averaged over radars when
    /// radars keep separate tracks).
    pub trace_sum: Vec<f64>,
    pub profiles: Vec<StrategyProfile>,
    /// Measurements taken in each slot.
    pub measurements: Vec<usize>,
    /// Largest trace increase over any single measurement update.
    pub max_step_increase: f64,
    /// Number of single-measurement updates performed.
    pub update_steps: usize,
    /// All radars held identical tracks at the end of every slot.
    pub tracks_identical: bool,
}

impl MetricsLog {
    pub fn counts(&self, slot: usize) -> Vec<usize> {
        self.profiles[slot].column_sums()
    }
}

/// Radar sites for one realization, with range factors drawn from `rng`
/// (radar-major) when the config gives an interval.
pub fn build_radars(cfg: &ScenarioConfig, rng: &mut impl Rng) -> Vec<RadarSite> {
    cfg.radars
        .iter()
        .enumerate()
        .map(|(i, r)| RadarSite {
            id: i,
            x: r.x,
            y: r.y,
            m: r.m,
            sigma_a: r.sigma_a,
            sigma_r_base: r.sigma_r_base,
            b: match &cfg.range_factors {
                RangeFactors::Matrix(rows) => rows[i].clone(),
                RangeFactors::Interval([lo, hi]) => (0..cfg.n_targets())
                    .map(|_| {
                        if hi > lo {
                            rng.gen_range(*lo..=*hi)
                        } else {
                            *lo
                        }
                    })
                    .collect(),
            },
        })
        .collect()
}

/// Game instance seen at a decision epoch: per-target increments from
/// applying looks by radars `0, 1, …, N−1, 0, 1, …` to the predicted tracks.
pub fn live_game(tracks: &[Track], radars: &[RadarSite], m: usize, c: f64) -> Result<GameSpec> {
    let depth = radars.len() * m;
    let order: Vec<&RadarSite> = (0..depth).map(|p| &radars[p % radars.len()]).collect();
    let increments = tracks
        .iter()
        .map(|t| Ok(gain_increments(&t.hypothetical_trace(&order)?)))
        .collect::<Result<Vec<_>>>()?;
    GameSpec::new(
        radars.len(),
        tracks.len(),
        m,
        c,
        GainTable::new(increments)?,
    )
}

struct Oracle<'a> {
    radars: &'a [RadarSite],
    /// Predicted tracks per radar.
    banks: &'a [Vec<Track>],
    c: f64,
    rank_mode: RankMode,
    accuracy: RefCell<HashMap<(usize, usize), f64>>,
    gains: RefCell<HashMap<(usize, Vec<u32>), f64>>,
}

impl Oracle<'_> {
    fn try_accuracy(&self, radar: usize, target: usize) -> Result<f64> {
        if let Some(v) = self.accuracy.borrow().get(&(radar, target)) {
            return Ok(*v);
        }
        let site = &self.radars[radar];
        let v = match self.rank_mode {
            RankMode::Live => {
                let trace = self.banks[radar][target].hypothetical_trace(&[site])?;
                gain_increments(&trace)[0]
            }
            RankMode::Static => site.range_std(target)?.powi(-2),
        };
        self.accuracy.borrow_mut().insert((radar, target), v);
        Ok(v)
    }

    /// Trace reduction of target `j` when radar `i` looks `column[i]` times,
    /// folded in canonical radar order.
    fn try_gain(&self, target: usize, column: Vec<u32>) -> Result<f64> {
        if let Some(v) = self.gains.borrow().get(&(target, column.clone())) {
            return Ok(*v);
        }
        let order: Vec<&RadarSite> = column
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat_n(&self.radars[i], n as usize))
            .collect();
        let trace = self.banks[0][target].hypothetical_trace(&order)?;
        let g = trace.predicted_trace
            - trace
                .per_step_traces
                .last()
                .copied()
                .unwrap_or(trace.predicted_trace);
        self.gains.borrow_mut().insert((target, column), g);
        Ok(g)
    }
}

impl SlotOracle for Oracle<'_> {
    fn accuracy(&self, radar: usize, target: usize) -> f64 {
        // Geometry is validated before the loop starts; a co-located target
        // simply ranks lowest.
        self.try_accuracy(radar, target)
            .unwrap_or(f64::NEG_INFINITY)
    }

    fn utility(&self, profile: &StrategyProfile) -> f64 {
        (0..profile.n_targets())
            .map(|j| {
                let column: Vec<u32> = profile.s.iter().map(|r| r[j]).collect();
                if column.iter().all(|&n| n == 0) {
                    -self.c
                } else {
                    self.try_gain(j, column).unwrap_or(f64::NEG_INFINITY)
                }
            })
            .sum()
    }
}

/// Simulate one realization of the scenario under `cfg.strategy`.
pub fn run_once(cfg: &ScenarioConfig, run_seed: u64) -> Result<MetricsLog> {
    cfg.validate()?;
    let model = cfg.motion_model()?;
    let n_radars = cfg.n_radars();
    let n_targets = cfg.n_targets();
    let ctx = GameContext {
        n_radars,
        n_targets,
        m: cfg.m(),
    };
    let kind = cfg.strategy;

    let radars = build_radars(cfg, &mut seed::rng(run_seed, &[seed::ACCURACY]));
    for r in &radars {
        r.validate()?;
    }
    let mut truth = cfg.initial_states();

    let mut init_rng = seed::rng(run_seed, &[seed::INIT]);
    let p0 = Matrix4::from_diagonal(&Vector4::from(cfg.p0_diag));
    let initial: Vec<Track> = truth
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let e = Vector4::from_fn(|k, _| {
                cfg.p0_diag[k].sqrt() * init_rng.sample::<f64, _>(StandardNormal)
            });
            Track::new(j, x.to_vector() + e, p0)
        })
        .collect();
    let mut banks: Vec<Vec<Track>> = vec![initial; n_radars];

    let mut selector = Selector::new(kind, ctx, cfg.dynamics.with_seed(run_seed), run_seed)?;
    let mut truth_rng = seed::rng(run_seed, &[seed::TRUTH]);

    let horizon = cfg.horizon as usize;
    let mut log = MetricsLog {
        strategy: kind,
        run_seed,
        trace_sum: Vec::with_capacity(horizon),
        profiles: Vec::with_capacity(horizon),
        measurements: Vec::with_capacity(horizon),
        max_step_increase: f64::NEG_INFINITY,
        update_steps: 0,
        tracks_identical: true,
    };

    for slot in 0..cfg.horizon {
        let time = slot + 1;
        for x in truth.iter_mut() {
            *x = model.step_truth(x, &mut truth_rng);
        }
        let predicted: Vec<Vec<Track>> = banks
            .iter()
            .map(|bank| bank.iter().map(|t| t.predict(&model)).collect())
            .collect();

        let profile = {
            let oracle = Oracle {
                radars: &radars,
                banks: &predicted,
                c: cfg.c,
                rank_mode: cfg.dynamics.rank_mode,
                accuracy: RefCell::default(),
                gains: RefCell::default(),
            };
            selector.select(slot, &oracle)
        };

        // Canonical order: radar id, then beam (ascending target id).
        let mut by_target: Vec<Vec<Measurement>> = vec![Vec::new(); n_targets];
        for (i, radar) in radars.iter().enumerate() {
            for (beam, j) in profile.selection(i).into_iter().enumerate() {
                let mut rng = seed::rng(
                    run_seed,
                    &[seed::MEASURE, time, i as u64, j as u64, beam as u64],
                );
                by_target[j].push(radar.sample_measurement(j, &truth[j], time, &mut rng)?);
            }
        }
        let n_meas: usize = by_target.iter().map(Vec::len).sum();

        for (i, bank) in banks.iter_mut().enumerate() {
            for (j, track) in bank.iter_mut().enumerate() {
                let own: Vec<Measurement>;
                let ms: &[Measurement] = if kind.shares_measurements() {
                    &by_target[j]
                } else {
                    own = by_target[j]
                        .iter()
                        .filter(|m| m.radar_id == i)
                        .cloned()
                        .collect();
                    &own
                };
                let (next, trace) = predicted[i][j].update_cyclic(ms, &radars)?;
                if !ms.is_empty() {
                    log.max_step_increase = log.max_step_increase.max(trace.max_step_increase());
                }
                log.update_steps += ms.len();
                *track = next;
            }
        }

        if kind.shares_measurements() {
            log.tracks_identical &= banks.iter().all(|b| *b == banks[0]);
        }
        let per_radar: Vec<f64> = banks
            .iter()
            .map(|b| b.iter().map(Track::trace).sum())
            .collect();
        let trace_sum = if kind.shares_measurements() {
            per_radar[0]
        } else {
            per_radar.iter().sum::<f64>() / n_radars as f64
        };
        log.trace_sum.push(trace_sum);
        log.profiles.push(profile);
        log.measurements.push(n_meas);
    }
    Ok(log)
}
