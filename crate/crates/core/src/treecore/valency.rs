use std::fmt;

use serde::{Deserialize, Serialize};

use super::TreeError;
use crate::periodic;

/// Eventually periodic degree sequence `d_1, d_2, …` of a spherically
/// symmetric tree. A vertex at depth `j - 1` has `d_j` children.
///
/// Stored in canonical form (shortest preperiod and period), so derived
/// equality is equality of sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ValencyJson", into = "ValencyJson")]
pub struct ValencySequence {
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ValencyJson {
    #[serde(default)]
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

impl TryFrom<ValencyJson> for ValencySequence {
    type Error = TreeError;
    fn try_from(v: ValencyJson) -> Result<Self, Self::Error> {
        ValencySequence::new(v.preperiod, v.period)
    }
}

impl From<ValencySequence> for ValencyJson {
    fn from(v: ValencySequence) -> Self {
        ValencyJson {
            preperiod: v.preperiod,
            period: v.period,
        }
    }
}

impl ValencySequence {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self, TreeError> {
        if period.is_empty() {
            return Err(TreeError::InvalidValency("period must be nonempty".into()));
        }
        if let Some(d) = preperiod.iter().chain(&period).find(|&&d| d < 2) {
            return Err(TreeError::InvalidValency(format!("degree {d} is below 2")));
        }
        let (preperiod, period) = periodic::canonicalize(preperiod, period);
        Ok(ValencySequence { preperiod, period })
    }

    /// The `d`-regular tree.
    pub fn regular(d: usize) -> Self {
        assert!(d >= 2, "degree must be at least 2");
        ValencySequence {
            preperiod: Vec::new(),
            period: vec![d],
        }
    }

    pub fn binary() -> Self {
        Self::regular(2)
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// `d_j` for `j ≥ 1`.
    pub fn degree(&self, j: usize) -> usize {
        assert!(j >= 1, "levels are numbered from 1");
        periodic::at(&self.preperiod, &self.period, j - 1)
    }

    /// Number of children of a vertex at depth `depth`.
    pub fn children_at_depth(&self, depth: usize) -> usize {
        self.degree(depth + 1)
    }

    pub fn max_degree(&self) -> usize {
        self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(2)
    }

    pub fn regular_degree(&self) -> Option<usize> {
        (self.preperiod.is_empty() && self.period.len() == 1).then(|| self.period[0])
    }

    /// Valency sequence of the subtree hanging from a level-`n` vertex.
    pub fn shift(&self, n: usize) -> Self {
        let (preperiod, period) = periodic::shift(&self.preperiod, &self.period, n);
        ValencySequence { preperiod, period }
    }

    /// `|L_n| = d_1 ⋯ d_n`, or `None` on overflow.
    pub fn level_size(&self, n: usize) -> Option<usize> {
        (1..=n).try_fold(1usize, |acc, j| acc.checked_mul(self.degree(j)))
    }

    /// `|L_n|`, failing if it exceeds `cap`.
    pub fn level_size_capped(&self, n: usize, cap: usize) -> Result<usize, TreeError> {
        match self.level_size(n) {
            Some(points) if points <= cap => Ok(points),
            Some(points) => Err(TreeError::CapExceeded { level: n, points, cap }),
            None => Err(TreeError::CapExceeded {
                level: n,
                points: usize::MAX,
                cap,
            }),
        }
    }
}

impl fmt::Display for ValencySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        if self.preperiod.is_empty() {
            write!(f, "({})^∞", join(&self.period))
        } else {
            write!(f, "{}({})^∞", join(&self.preperiod), join(&self.period))
        }
    }
}
