use serde::{Deserialize, Serialize};

use super::GameSpec;
use crate::error::{Error, Result};

/// Beam counts per radar (rows) and target (columns).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub s: Vec<Vec<u32>>,
}

impl StrategyProfile {
    pub fn new(s: Vec<Vec<u32>>) -> Self {
        Self { s }
    }

    pub fn zeros(n_radars: usize, n_targets: usize) -> Self {
        Self {
            s: vec![vec![0; n_targets]; n_radars],
        }
    }

    /// Build from each radar's list of selected targets (repeats allowed).
    pub fn from_selections(n_targets: usize, selections: &[Vec<usize>]) -> Result<Self> {
        let mut p = Self::zeros(selections.len(), n_targets);
        for (i, sel) in selections.iter().enumerate() {
            for &j in sel {
                let cell = p.s[i].get_mut(j).ok_or(Error::UnknownTarget {
                    target_id: j,
                    n_targets,
                })?;
                *cell += 1;
            }
        }
        Ok(p)
    }

    pub fn n_radars(&self) -> usize {
        self.s.len()
    }

    pub fn n_targets(&self) -> usize {
        self.s.first().map_or(0, Vec::len)
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.s
            .iter()
            .map(|r| r.iter().map(|&v| v as usize).sum())
            .collect()
    }

    /// Beams on each target, `m_j`.
    pub fn column_sums(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.n_targets()];
        for row in &self.s {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v as usize;
            }
        }
        out
    }

    /// `max_j m_j − min_j m_j`.
    pub fn coverage_gap(&self) -> usize {
        let cs = self.column_sums();
        let max = cs.iter().copied().max().unwrap_or(0);
        let min = cs.iter().copied().min().unwrap_or(0);
        max - min
    }

    /// Every radar uses exactly `m` beams.
    pub fn is_full(&self, m: usize) -> bool {
        self.row_sums().iter().all(|&r| r == m)
    }

    /// No radar puts two beams on the same target.
    pub fn is_duplicate_free(&self) -> bool {
        self.s.iter().all(|r| r.iter().all(|&v| v <= 1))
    }

    /// Targets selected by radar `i`, with repeats, in ascending order.
    pub fn selection(&self, i: usize) -> Vec<usize> {
        self.s[i]
            .iter()
            .enumerate()
            .flat_map(|(j, &v)| std::iter::repeat_n(j, v as usize))
            .collect()
    }

    /// Number of ordered beam assignments (beam 1 → target, beam 2 → target,
    /// … for every radar) that collapse onto this matrix.
    pub fn ordered_assignments(&self) -> u128 {
        self.s
            .iter()
            .map(|row| {
                let total: u32 = row.iter().sum();
                row.iter()
                    .fold(factorial(total), |acc, &v| acc / factorial(v))
            })
            .product()
    }

    pub fn validate(&self, spec: &GameSpec) -> Result<()> {
        if self.s.len() != spec.n_radars {
            return Err(Error::InvalidProfile(format!(
                "{} rows for {} radars",
                self.s.len(),
                spec.n_radars
            )));
        }
        for (i, row) in self.s.iter().enumerate() {
            if row.len() != spec.n_targets {
                return Err(Error::InvalidProfile(format!(
                    "row {i} has {} entries for {} targets",
                    row.len(),
                    spec.n_targets
                )));
            }
            let used: u32 = row.iter().sum();
            if used as usize > spec.m {
                return Err(Error::InvalidProfile(format!(
                    "radar {i} uses {used} beams, budget is {}",
                    spec.m
                )));
            }
        }
        Ok(())
    }
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_and_selection() {
        let p = StrategyProfile::from_selections(5, &[vec![0, 0], vec![1, 4], vec![2, 3]]).unwrap();
        assert_eq!(p.row_sums(), vec![2, 2, 2]);
        assert_eq!(p.column_sums(), vec![2, 1, 1, 1, 1]);
        assert_eq!(p.coverage_gap(), 1);
        assert!(p.is_full(2));
        assert!(!p.is_duplicate_free());
        assert_eq!(p.selection(0), vec![0, 0]);
        assert_eq!(p.selection(1), vec![1, 4]);
        // rows: {0,0} → 1 ordering, {1,4} and {2,3} → 2 each.
        assert_eq!(p.ordered_assignments(), 4);
        assert!(StrategyProfile::from_selections(2, &[vec![2]]).is_err());
    }
}
