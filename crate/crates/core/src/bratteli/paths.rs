use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::diagram::BratteliDiagram;
use super::BratteliError;
use crate::caps;

/// A path from the root: `edges[j]` indexes into `E_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePath {
    edges: Vec<usize>,
    end: usize,
}

impl FinitePath {
    pub fn new(b: &BratteliDiagram, edges: Vec<usize>) -> Result<FinitePath, BratteliError> {
        let end = b.end_of(&edges)?;
        Ok(FinitePath { edges, end })
    }

    /// The empty path at the root.
    pub fn root() -> FinitePath {
        FinitePath {
            edges: Vec::new(),
            end: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// The end vertex `r(e_n)`, a vertex of level `len()`.
    pub fn end(&self) -> usize {
        self.end
    }

    pub fn prefix(&self, b: &BratteliDiagram, k: usize) -> Result<FinitePath, BratteliError> {
        if k > self.len() {
            return Err(BratteliError::Precondition(format!("path of length {} has no prefix of length {k}", self.len())));
        }
        FinitePath::new(b, self.edges[..k].to_vec())
    }

    pub fn extend(&self, b: &BratteliDiagram, e: usize) -> Result<FinitePath, BratteliError> {
        let mut edges = self.edges.clone();
        edges.push(e);
        FinitePath::new(b, edges)
    }

    pub fn starts_with(&self, other: &FinitePath) -> bool {
        self.edges.starts_with(&other.edges)
    }

    pub(crate) fn from_parts(edges: Vec<usize>, end: usize) -> FinitePath {
        FinitePath { edges, end }
    }
}

/// All paths from the root to level `n`, in lexicographic order of edge
/// indices, grouped by end vertex.
#[derive(Clone, Debug)]
pub struct LevelPaths {
    level: usize,
    paths: Vec<FinitePath>,
    by_vertex: Vec<Vec<usize>>,
    local: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl LevelPaths {
    /// Enumerates level `n` depth first. Fails when the level has more
    /// paths than [`caps::max_points`].
    pub fn new(b: &BratteliDiagram, n: usize) -> Result<LevelPaths, BratteliError> {
        b.check_level(n)?;
        let total: num_bigint::BigUint = b.path_count(n)?.into_iter().sum();
        let cap = caps::max_points();
        if total.to_usize().map_or(true, |t| t > cap) {
            return Err(BratteliError::CapExceeded {
                level: n,
                points: total.to_string(),
                cap,
            });
        }
        let mut paths = Vec::new();
        let mut stack = vec![(Vec::new(), 0usize)];
        while let Some((edges, v)) = stack.pop() {
            let i = edges.len();
            if i == n {
                paths.push(FinitePath::from_parts(edges, v));
                continue;
            }
            let outs: Vec<usize> = b.out_edges(i, v).collect();
            for &e in outs.iter().rev() {
                let mut next = edges.clone();
                next.push(e);
                stack.push((next, b.edges(i + 1)[e].1));
            }
        }
        let mut by_vertex = vec![Vec::new(); b.level_size(n)];
        let mut local = Vec::with_capacity(paths.len());
        let mut index = HashMap::with_capacity(paths.len());
        for (i, p) in paths.iter().enumerate() {
            local.push(by_vertex[p.end()].len());
            by_vertex[p.end()].push(i);
            index.insert(p.edges().to_vec(), i);
        }
        Ok(LevelPaths {
            level: n,
            paths,
            by_vertex,
            local,
            index,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[FinitePath] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &FinitePath {
        &self.paths[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.by_vertex.len()
    }

    /// Global indices of `E(v0, v)`.
    pub fn ending_at(&self, v: usize) -> &[usize] {
        &self.by_vertex[v]
    }

    /// `|E(v0, v)|`.
    pub fn degree(&self, v: usize) -> usize {
        self.by_vertex[v].len()
    }

    /// Position of a path inside `E(v0, end)`.
    pub fn local_index(&self, i: usize) -> usize {
        self.local[i]
    }

    /// Global index of the `n`-prefix of `p`.
    pub fn index_of(&self, p: &FinitePath) -> Result<usize, BratteliError> {
        if p.len() < self.level {
            return Err(BratteliError::Precondition(format!(
                "path of length {} is shorter than level {}",
                p.len(),
                self.level
            )));
        }
        self.index
            .get(&p.edges()[..self.level])
            .copied()
            .ok_or_else(|| BratteliError::InvalidPath(format!("{:?} is not a path of the diagram", p.edges())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bratteli::builtin::odometer;

    #[test]
    fn odometer_level() {
        let b = odometer(3, 4);
        let lp = LevelPaths::new(&b, 2).unwrap();
        assert_eq!(lp.len(), 9);
        assert_eq!(lp.path(4).edges(), &[1, 1]);
        assert_eq!(lp.index_of(&FinitePath::new(&b, vec![2, 0, 1]).unwrap()).unwrap(), 6);
        assert!(FinitePath::new(&b, vec![3]).is_err());
    }
}
