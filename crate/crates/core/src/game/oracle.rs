//! Brute-force enumeration, Nash and Pareto oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{strictly_greater, GameSpec, ProfileSpace, StrategyProfile};
use crate::error::{Error, Result};

/// Largest profile space (or per-radar row space) the oracles will walk.
pub const MAX_PROFILES: u128 = 1 << 22;

/// All strategy rows of `space`, in lexicographic order.
pub fn rows(space: ProfileSpace, n_targets: usize, m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut row = vec![0u32; n_targets];
    match space {
        ProfileSpace::Full => push_compositions(&mut out, &mut row, 0, m as u32),
        ProfileSpace::Distinct => push_subsets(&mut out, &mut row, 0, m),
    }
    out
}

fn push_compositions(out: &mut Vec<Vec<u32>>, row: &mut Vec<u32>, j: usize, left: u32) {
    if j == row.len() {
        out.push(row.clone());
        return;
    }
    for v in 0..=left {
        row[j] = v;
        push_compositions(out, row, j + 1, left - v);
    }
    row[j] = 0;
}

fn push_subsets(out: &mut Vec<Vec<u32>>, row: &mut Vec<u32>, j: usize, left: usize) {
    if left == 0 {
        out.push(row.clone());
        return;
    }
    if row.len() - j < left {
        return;
    }
    row[j] = 1;
    push_subsets(out, row, j + 1, left - 1);
    row[j] = 0;
    push_subsets(out, row, j + 1, left);
}

fn row_count(space: ProfileSpace, n_targets: usize, m: usize) -> u128 {
    match space {
        ProfileSpace::Full => binomial(n_targets + m, m),
        ProfileSpace::Distinct => binomial(n_targets, m),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Size of the profile space, or `None` on overflow.
pub fn profile_count(spec: &GameSpec, space: ProfileSpace) -> Option<u128> {
    let per_radar = row_count(space, spec.n_targets, spec.m);
    (0..spec.n_radars).try_fold(1u128, |acc, _| acc.checked_mul(per_radar))
}

fn guard(spec: &GameSpec, space: ProfileSpace) -> Result<u128> {
    match profile_count(spec, space) {
        Some(count) if count <= MAX_PROFILES => Ok(count),
        other => Err(Error::InstanceTooLarge {
            count: other.unwrap_or(u128::MAX),
            limit: MAX_PROFILES,
        }),
    }
}

struct Space {
    rows: Vec<Vec<u32>>,
    n_radars: usize,
}

impl Space {
    fn new(spec: &GameSpec, space: ProfileSpace) -> Self {
        Self {
            rows: rows(space, spec.n_targets, spec.m),
            n_radars: spec.n_radars,
        }
    }

    /// Radar 0 is the most significant digit.
    fn profile_at(&self, mut index: u128) -> StrategyProfile {
        let base = self.rows.len() as u128;
        let mut s = vec![Vec::new(); self.n_radars];
        for i in (0..self.n_radars).rev() {
            s[i] = self.rows[(index % base) as usize].clone();
            index /= base;
        }
        StrategyProfile::new(s)
    }
}

/// Every profile of `space` exactly once.
pub fn enumerate_profiles(
    spec: &GameSpec,
    space: ProfileSpace,
) -> Result<impl Iterator<Item = StrategyProfile>> {
    let count = guard(spec, space)?;
    let space = Space::new(spec, space);
    Ok((0..count).map(move |k| space.profile_at(k)))
}

/// A unilateral change of strategy that strictly raises one radar's payoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub radar_id: usize,
    pub row: Vec<u32>,
    pub improvement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NashCheck {
    Equilibrium,
    Improvable(Deviation),
}

impl NashCheck {
    pub fn holds(&self) -> bool {
        matches!(self, NashCheck::Equilibrium)
    }
}

/// Whether `profile` is a pure Nash equilibrium against every alternative
/// row of `space`; otherwise the best deviation of the lowest-id radar that
/// has one.
pub fn is_nash(
    spec: &GameSpec,
    profile: &StrategyProfile,
    space: ProfileSpace,
) -> Result<NashCheck> {
    profile.validate(spec)?;
    let n_rows = row_count(space, spec.n_targets, spec.m);
    if n_rows > MAX_PROFILES {
        return Err(Error::InstanceTooLarge {
            count: n_rows,
            limit: MAX_PROFILES,
        });
    }
    let alternatives = rows(space, spec.n_targets, spec.m);
    Ok(match find_deviation(spec, profile, &alternatives)? {
        Some(d) => NashCheck::Improvable(d),
        None => NashCheck::Equilibrium,
    })
}

pub fn find_deviation(
    spec: &GameSpec,
    profile: &StrategyProfile,
    alternatives: &[Vec<u32>],
) -> Result<Option<Deviation>> {
    let counts = profile.column_sums();
    let current = spec.utility_of_counts(&counts)?;
    let mut others = vec![0usize; counts.len()];
    for (i, own) in profile.s.iter().enumerate() {
        for (o, (&c, &v)) in others.iter_mut().zip(counts.iter().zip(own)) {
            *o = c - v as usize;
        }
        let mut best: Option<Deviation> = None;
        let mut trial = vec![0usize; counts.len()];
        for row in alternatives {
            for (t, (&o, &v)) in trial.iter_mut().zip(others.iter().zip(row)) {
                *t = o + v as usize;
            }
            let u = spec.utility_of_counts(&trial)?;
            if strictly_greater(u, current)
                && best.as_ref().is_none_or(|b| u - current > b.improvement)
            {
                best = Some(Deviation {
                    radar_id: i,
                    row: row.clone(),
                    improvement: u - current,
                });
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

/// All pure Nash equilibria of `space`, in enumeration order.
pub fn nash_set(spec: &GameSpec, space: ProfileSpace) -> Result<Vec<StrategyProfile>> {
    let count = guard(spec, space)?;
    let sp = Space::new(spec, space);
    let found: Result<Vec<Option<StrategyProfile>>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let p = sp.profile_at(k);
            Ok(find_deviation(spec, &p, &sp.rows)?.is_none().then_some(p))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// `a` is at least as good for every radar and strictly better for one.
fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !strictly_greater(y, x))
        && a.iter().zip(b).any(|(&x, &y)| strictly_greater(x, y))
}

/// No member of `candidates` Pareto-dominates `profile`.
pub fn is_pareto_optimal(
    spec: &GameSpec,
    profile: &StrategyProfile,
    candidates: &[StrategyProfile],
) -> Result<bool> {
    let u = spec.utilities(profile)?;
    for c in candidates {
        if dominates(&spec.utilities(c)?, &u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pareto-optimal profiles of `space`, in enumeration order.
pub fn pareto_set(spec: &GameSpec, space: ProfileSpace) -> Result<Vec<StrategyProfile>> {
    let profiles: Vec<StrategyProfile> = enumerate_profiles(spec, space)?.collect();
    let utils: Vec<Vec<f64>> = profiles
        .par_iter()
        .map(|p| spec.utilities(p))
        .collect::<Result<_>>()?;
    let keep: Vec<bool> = utils
        .par_iter()
        .map(|u| !utils.iter().any(|v| dominates(v, u)))
        .collect();
    Ok(profiles
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GainTable;

    fn spec(n_radars: usize, n_targets: usize, m: usize, c: f64, incs: &[f64]) -> GameSpec {
        GameSpec::new(
            n_radars,
            n_targets,
            m,
            c,
            GainTable::uniform(n_targets, incs).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let s = spec(1, 2, 1, 0.0, &[1.0]);
        let all: Vec<_> = enumerate_profiles(&s, ProfileSpace::Full)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 3);

        let s = spec(2, 3, 1, 0.0, &[1.0, 0.5]);
        let all: Vec<_> = enumerate_profiles(&s, ProfileSpace::Full)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 16);
        assert_eq!(profile_count(&s, ProfileSpace::Full), Some(16));
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 16);
        assert!(all.iter().all(|p| p.validate(&s).is_ok()));

        let s = spec(3, 5, 2, 0.0, &[3.0, 2.0, 1.0, 0.5, 0.25, 0.1]);
        let d: Vec<_> = enumerate_profiles(&s, ProfileSpace::Distinct)
            .unwrap()
            .collect();
        assert_eq!(d.len(), 1000);
        assert!(d.iter().all(|p| p.is_full(2) && p.is_duplicate_free()));
        assert_eq!(profile_count(&s, ProfileSpace::Full), Some(21u128.pow(3)));
    }

    #[test]
    fn size_guard() {
        let incs = vec![1.0; 40];
        let s = spec(8, 10, 5, 0.0, &incs);
        assert!(matches!(
            enumerate_profiles(&s, ProfileSpace::Full).err(),
            Some(Error::InstanceTooLarge { .. })
        ));
        assert!(nash_set(&s, ProfileSpace::Full).is_err());
    }

    #[test]
    fn two_radar_two_target_nash() {
        let s = spec(2, 2, 1, 0.1, &[3.0, 2.0, 1.0]);
        let split = StrategyProfile::new(vec![vec![1, 0], vec![0, 1]]);
        assert!(is_nash(&s, &split, ProfileSpace::Full).unwrap().holds());
        let stacked = StrategyProfile::new(vec![vec![1, 0], vec![1, 0]]);
        match is_nash(&s, &stacked, ProfileSpace::Full).unwrap() {
            NashCheck::Improvable(d) => {
                assert_eq!(d.radar_id, 0);
                assert_eq!(d.row, vec![0, 1]);
                // 3 − 2 from the gain, plus the 0.1 delay penalty removed.
                assert!((d.improvement - 1.1).abs() < 1e-12);
            }
            NashCheck::Equilibrium => panic!("stacked profile is not an equilibrium"),
        }
        let ne = nash_set(&s, ProfileSpace::Full).unwrap();
        assert_eq!(ne.len(), 2);
    }

    #[test]
    fn idle_beams_are_never_equilibria() {
        let s = spec(2, 3, 2, 0.1, &[3.0, 2.0, 1.0, 0.5]);
        for p in nash_set(&s, ProfileSpace::Full).unwrap() {
            assert!(p.is_full(2));
        }
        let partial = StrategyProfile::new(vec![vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(!is_nash(&s, &partial, ProfileSpace::Full).unwrap().holds());
    }

    #[test]
    fn single_radar_nash_is_optimisation() {
        let t = GainTable::new(vec![vec![1.0, 0.2], vec![3.0, 0.4], vec![2.0, 0.1]]).unwrap();
        let s = GameSpec::new(1, 3, 2, 0.0, t).unwrap();
        let best = enumerate_profiles(&s, ProfileSpace::Full)
            .unwrap()
            .map(|p| s.utility(&p, 0).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        for p in enumerate_profiles(&s, ProfileSpace::Full).unwrap() {
            let u = s.utility(&p, 0).unwrap();
            assert_eq!(
                is_nash(&s, &p, ProfileSpace::Full).unwrap().holds(),
                u == best
            );
        }
    }

    #[test]
    fn zero_gains_make_every_full_profile_nash() {
        let s = spec(2, 3, 1, 0.0, &[0.0, 0.0]);
        let ne = nash_set(&s, ProfileSpace::Full).unwrap();
        assert_eq!(ne.len(), 16);
    }

    #[test]
    fn pareto_examples() {
        let s = spec(2, 3, 1, 0.1, &[3.0, 2.0, 1.0]);
        let all: Vec<_> = enumerate_profiles(&s, ProfileSpace::Full)
            .unwrap()
            .collect();
        for p in nash_set(&s, ProfileSpace::Full).unwrap() {
            assert!(is_pareto_optimal(&s, &p, &all).unwrap());
        }
        let po = pareto_set(&s, ProfileSpace::Full).unwrap();
        let best = all
            .iter()
            .map(|p| s.utility(p, 0).unwrap())
            .fold(f64::MIN, f64::max);
        for p in &all {
            let is_best = s.utility(p, 0).unwrap() == best;
            assert_eq!(po.contains(p), is_best);
        }
    }
}
