use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{TreeError, ValencySequence};

/// A finite word `v_1 … v_n`; the empty word is the root.
///
/// Ordering is lexicographic on digits, so sorting vertices of one level
/// gives the same order as [`Level::index_of`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Vertex(Vec<usize>);

impl Vertex {
    pub fn root() -> Vertex {
        Vertex(Vec::new())
    }

    pub fn new(digits: Vec<usize>) -> Vertex {
        Vertex(digits)
    }

    /// Builds a vertex after checking every digit against `valency`.
    pub fn checked(digits: Vec<usize>, valency: &ValencySequence) -> Result<Vertex, TreeError> {
        let v = Vertex(digits);
        v.validate(valency)?;
        Ok(v)
    }

    pub fn validate(&self, valency: &ValencySequence) -> Result<(), TreeError> {
        for (k, &digit) in self.0.iter().enumerate() {
            let degree = valency.degree(k + 1);
            if digit >= degree {
                return Err(TreeError::DigitOutOfRange {
                    position: k + 1,
                    digit,
                    degree,
                });
            }
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, x: usize) -> Vertex {
        let mut d = self.0.clone();
        d.push(x);
        Vertex(d)
    }

    pub fn parent(&self) -> Option<Vertex> {
        (!self.0.is_empty()).then(|| Vertex(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Vertex) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn concat(&self, tail: &[usize]) -> Vertex {
        let mut d = self.0.clone();
        d.extend_from_slice(tail);
        Vertex(d)
    }

    /// All vertices `self·u` with `|u| = k`, in lexicographic order.
    pub fn descendants(&self, valency: &ValencySequence, k: usize) -> Vec<Vertex> {
        let mut out = vec![self.clone()];
        for step in 0..k {
            let degree = valency.degree(self.depth() + step + 1);
            out = out
                .into_iter()
                .flat_map(|v| (0..degree).map(move |x| v.child(x)))
                .collect();
        }
        out
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        if self.0.iter().all(|&d| d < 10) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl FromStr for Vertex {
    type Err = TreeError;

    /// `"0110"` (one digit per level), `"3.11.2"` (dot separated), and `""`
    /// or `"∅"` for the root.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Vertex::root());
        }
        let digits: Option<Vec<usize>> = if s.contains('.') {
            s.split('.').map(|p| p.parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        digits.map(Vertex).ok_or_else(|| TreeError::Parse(s.to_string()))
    }
}

impl TryFrom<String> for Vertex {
    type Error = TreeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Vertex> for String {
    fn from(v: Vertex) -> Self {
        if v.is_root() {
            String::new()
        } else {
            v.to_string()
        }
    }
}

/// Dense indexing of a tree level `L_n`: vertex ↔ mixed-radix number, in
/// lexicographic order. The level-`n` descendants of a vertex form a
/// contiguous index range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    valency: ValencySequence,
    depth: usize,
    /// `block[k]` = number of level-`depth` descendants of a level-`k` vertex.
    block: Vec<usize>,
}

impl Level {
    pub fn new(valency: &ValencySequence, depth: usize) -> Result<Level, TreeError> {
        Self::with_cap(valency, depth, crate::caps::max_points())
    }

    pub fn with_cap(valency: &ValencySequence, depth: usize, cap: usize) -> Result<Level, TreeError> {
        valency.level_size_capped(depth, cap)?;
        let mut block = vec![1usize; depth + 1];
        for k in (0..depth).rev() {
            block[k] = block[k + 1] * valency.degree(k + 1);
        }
        Ok(Level {
            valency: valency.clone(),
            depth,
            block,
        })
    }

    pub fn valency(&self) -> &ValencySequence {
        &self.valency
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn size(&self) -> usize {
        self.block[0]
    }

    /// Number of vertices on level `k ≤ depth`.
    pub fn size_at(&self, k: usize) -> usize {
        self.block[0] / self.block[k]
    }

    pub fn index_of(&self, v: &Vertex) -> usize {
        assert_eq!(v.depth(), self.depth, "vertex is not on this level");
        v.digits()
            .iter()
            .enumerate()
            .map(|(k, &d)| d * self.block[k + 1])
            .sum()
    }

    pub fn vertex_at(&self, mut idx: usize) -> Vertex {
        let mut digits = Vec::with_capacity(self.depth);
        for k in 1..=self.depth {
            digits.push(idx / self.block[k]);
            idx %= self.block[k];
        }
        Vertex(digits)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.size()).map(|i| self.vertex_at(i))
    }

    /// Index range of the level-`depth` descendants of `u` (`|u| ≤ depth`).
    pub fn subtree_range(&self, u: &Vertex) -> Range<usize> {
        let k = u.depth();
        assert!(k <= self.depth, "vertex below the level");
        let start: usize = u
            .digits()
            .iter()
            .enumerate()
            .map(|(j, &d)| d * self.block[j + 1])
            .sum();
        start..start + self.block[k]
    }

    /// Index, among level-`k` vertices, of the ancestor of point `idx`.
    pub fn ancestor_index(&self, idx: usize, k: usize) -> usize {
        idx / self.block[k]
    }

    /// Size of the subtree block of a level-`k` vertex.
    pub fn block_size(&self, k: usize) -> usize {
        self.block[k]
    }

    /// The level-`k` sub-indexer (`k ≤ depth`).
    pub fn truncate(&self, k: usize) -> Level {
        assert!(k <= self.depth);
        Level::with_cap(&self.valency, k, usize::MAX).expect("smaller level always fits")
    }
}
