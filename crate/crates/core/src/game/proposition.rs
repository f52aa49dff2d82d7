//! Structural checks of the equilibrium characterisations for the two
//! gain-table cases.
//!
//! * Identical increments (case a), `c ≥ 0`: the Pareto-optimal equilibria
//!   are exactly the full-beam profiles whose coverage is distinct (when
//!   `|N|·m ≤ |T|`) or balanced to within one beam (otherwise).
//! * Level-separated increments (case b), `c ≥ 0`: every equilibrium fills
//!   the first `⌈|N|·m/|T|⌉ − 1` coverage levels, and topping up the last
//!   level greedily by accuracy yields an equilibrium.

use serde::{Deserialize, Serialize};

use super::{
    enumerate_profiles, is_nash, is_pareto_optimal, nash_set, GameSpec, ProfileSpace,
    StrategyProfile,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Proposition {
    /// Identical increments across targets.
    CaseA,
    /// Level-separated increments.
    CaseB,
}

impl Proposition {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Proposition::CaseA),
            2 => Ok(Proposition::CaseB),
            _ => Err(Error::invalid(format!(
                "unknown proposition {n}; expected 1 or 2"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub profile: StrategyProfile,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub proposition: Proposition,
    pub space: ProfileSpace,
    pub n_profiles: usize,
    /// Equilibria as beam-count matrices.
    pub nash_count: usize,
    /// Equilibria counted as ordered beam-to-target assignments; a matrix
    /// row with `m` distinct targets stands for `m!` orderings.
    pub nash_ordered_count: u128,
    pub pareto_optimal_nash_count: usize,
    /// Predicted profiles (matrices) and their ordered-assignment count.
    pub predicted_count: usize,
    pub predicted_ordered_count: u128,
    /// Greedy accuracy-ordered profile used by the case-b check.
    pub greedy_profile: Option<StrategyProfile>,
    pub counterexamples: Vec<Counterexample>,
}

impl PropositionReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn check_proposition(
    spec: &GameSpec,
    which: Proposition,
    space: ProfileSpace,
) -> Result<PropositionReport> {
    spec.validate()?;
    if spec.c < 0.0 {
        return Err(Error::invalid("proposition checks require c >= 0"));
    }
    match which {
        Proposition::CaseA if !spec.gain_table.is_case_a() => {
            return Err(Error::CaseNotSatisfied('a'))
        }
        Proposition::CaseB if !spec.gain_table.is_case_b() => {
            return Err(Error::CaseNotSatisfied('b'))
        }
        _ => {}
    }

    let all: Vec<StrategyProfile> = enumerate_profiles(spec, space)?.collect();
    let nash = nash_set(spec, space)?;
    let mut po_nash = Vec::new();
    for p in &nash {
        if is_pareto_optimal(spec, p, &all)? {
            po_nash.push(p.clone());
        }
    }

    let mut report = PropositionReport {
        proposition: which,
        space,
        n_profiles: all.len(),
        nash_count: nash.len(),
        nash_ordered_count: nash.iter().map(StrategyProfile::ordered_assignments).sum(),
        pareto_optimal_nash_count: po_nash.len(),
        predicted_count: 0,
        predicted_ordered_count: 0,
        greedy_profile: None,
        counterexamples: Vec::new(),
    };

    match which {
        Proposition::CaseA => check_case_a(spec, &all, &po_nash, &mut report),
        Proposition::CaseB => check_case_b(spec, space, &nash, &mut report)?,
    }
    Ok(report)
}

fn check_case_a(
    spec: &GameSpec,
    all: &[StrategyProfile],
    po_nash: &[StrategyProfile],
    report: &mut PropositionReport,
) {
    let sparse = spec.total_beams() <= spec.n_targets;
    let predicted: Vec<&StrategyProfile> = all
        .iter()
        .filter(|p| {
            p.is_full(spec.m)
                && if sparse {
                    p.column_sums().iter().all(|&n| n <= 1)
                } else {
                    p.coverage_gap() <= 1
                }
        })
        .collect();
    report.predicted_count = predicted.len();
    report.predicted_ordered_count = predicted.iter().map(|p| p.ordered_assignments()).sum();

    for p in &predicted {
        if !po_nash.contains(p) {
            report.counterexamples.push(Counterexample {
                profile: (*p).clone(),
                reason: "predicted allocation is not a Pareto-optimal equilibrium".into(),
            });
        }
    }
    for p in po_nash {
        if !predicted.contains(&p) {
            report.counterexamples.push(Counterexample {
                profile: p.clone(),
                reason: "Pareto-optimal equilibrium outside the predicted allocations".into(),
            });
        }
    }
}

fn check_case_b(
    spec: &GameSpec,
    space: ProfileSpace,
    nash: &[StrategyProfile],
    report: &mut PropositionReport,
) -> Result<()> {
    let floor = spec.top_level() - 1;
    for p in nash {
        if p.column_sums().iter().any(|&n| n < floor) {
            report.counterexamples.push(Counterexample {
                profile: p.clone(),
                reason: format!("equilibrium leaves a target below level {floor}"),
            });
        }
    }

    let greedy = greedy_level_fill(spec);
    report.predicted_count = 1;
    report.predicted_ordered_count = greedy.ordered_assignments();
    let in_space =
        space == ProfileSpace::Full || (greedy.is_duplicate_free() && greedy.is_full(spec.m));
    if !in_space {
        report.counterexamples.push(Counterexample {
            profile: greedy.clone(),
            reason: "greedy allocation needs repeated targets, outside the distinct space".into(),
        });
    } else if !is_nash(spec, &greedy, space)?.holds() {
        report.counterexamples.push(Counterexample {
            profile: greedy.clone(),
            reason: "greedy accuracy-ordered allocation is not an equilibrium".into(),
        });
    }
    report.greedy_profile = Some(greedy);
    Ok(())
}

/// Fill every target to the level below the top, then hand the remaining
/// beams to the targets with the largest top-level increment; beams are
/// dealt to radars in turn so that no radar repeats a target while the
/// level stays within the number of radars.
///
/// When `|N|·m ≤ |T|` this reduces to each radar in turn taking its most
/// accurate target not yet selected.
pub fn greedy_level_fill(spec: &GameSpec) -> StrategyProfile {
    let level = spec.top_level();
    let floor = level - 1;
    let extra = spec.total_beams() - floor * spec.n_targets;

    let mut by_top: Vec<usize> = (0..spec.n_targets).collect();
    let incs = &spec.gain_table.increments;
    by_top.sort_by(|&a, &b| {
        incs[b][level - 1]
            .total_cmp(&incs[a][level - 1])
            .then(a.cmp(&b))
    });

    let mut counts = vec![floor; spec.n_targets];
    for &j in by_top.iter().take(extra) {
        counts[j] += 1;
    }

    // Most-covered (then most accurate) targets first, one beam per radar in turn.
    let mut order = by_top.clone();
    order.sort_by_key(|&j| std::cmp::Reverse(counts[j]));
    let beams: Vec<usize> = order
        .iter()
        .flat_map(|&j| std::iter::repeat_n(j, counts[j]))
        .collect();

    let mut selections = vec![Vec::new(); spec.n_radars];
    if level == 1 {
        for (k, &j) in beams.iter().enumerate() {
            selections[k / spec.m].push(j);
        }
    } else {
        for (k, &j) in beams.iter().enumerate() {
            selections[k % spec.n_radars].push(j);
        }
    }
    StrategyProfile::from_selections(spec.n_targets, &selections)
        .expect("greedy selections index valid targets")
}
