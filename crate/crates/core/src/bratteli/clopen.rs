use std::collections::{BTreeMap, BTreeSet};


use super::diagram::BratteliDiagram;
use super::paths::{FinitePath, LevelPaths};
use super::BratteliError;

/// A clopen subset of the path space: a union of cylinders `U(e_1, …, e_k)`,
/// stored as the cylinders of the least common depth `n_0` that expresses
/// it, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenSet {
    depth: usize,
    cylinders: Vec<FinitePath>,
}

impl ClopenSet {
    /// The union of the cylinders with the given edge-index prefixes.
    pub fn new(b: &BratteliDiagram, cylinders: &[Vec<usize>]) -> Result<ClopenSet, BratteliError> {
        let paths = cylinders
            .iter()
            .map(|c| FinitePath::new(b, c.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_paths(b, &paths))
    }

    pub fn from_paths(b: &BratteliDiagram, cylinders: &[FinitePath]) -> ClopenSet {
        let depth = cylinders.iter().map(FinitePath::len).max().unwrap_or(0);
        let mut set: BTreeSet<FinitePath> = BTreeSet::new();
        for c in cylinders {
            extend_to(b, c, depth, &mut set);
        }
        Self::reduce(b, depth, set)
    }

    fn reduce(b: &BratteliDiagram, mut depth: usize, mut set: BTreeSet<FinitePath>) -> ClopenSet {
        while depth > 0 && !set.is_empty() {
            let mut groups: BTreeMap<&[usize], usize> = BTreeMap::new();
            for p in &set {
                *groups.entry(&p.edges()[..depth - 1]).or_default() += 1;
            }
            let complete = groups.iter().all(|(prefix, &count)| {
                let end = b.end_of(prefix).expect("prefix of a valid path");
                b.out_edges(depth - 1, end).count() == count
            });
            if !complete {
                break;
            }
            let parents: BTreeSet<FinitePath> = groups
                .keys()
                .map(|prefix| FinitePath::new(b, prefix.to_vec()).expect("prefix of a valid path"))
                .collect();
            set = parents;
            depth -= 1;
        }
        if set.is_empty() {
            depth = 0;
        }
        ClopenSet {
            depth,
            cylinders: set.into_iter().collect(),
        }
    }

    pub fn empty() -> ClopenSet {
        ClopenSet {
            depth: 0,
            cylinders: Vec::new(),
        }
    }

    /// The whole path space.
    pub fn full() -> ClopenSet {
        ClopenSet {
            depth: 0,
            cylinders: vec![FinitePath::root()],
        }
    }

    /// A single cylinder.
    pub fn cylinder(b: &BratteliDiagram, p: &FinitePath) -> ClopenSet {
        Self::from_paths(b, std::slice::from_ref(p))
    }

    /// The least depth `n_0` at which the set is a union of cylinders.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cylinders(&self) -> &[FinitePath] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.depth == 0 && !self.cylinders.is_empty()
    }

    /// Edge-index lists of the cylinders, the JSON form.
    pub fn to_spec(&self) -> Vec<Vec<usize>> {
        self.cylinders.iter().map(|c| c.edges().to_vec()).collect()
    }

    /// Whether the cylinder of `p` lies in the set; `p` must reach depth
    /// `n_0`.
    pub fn contains(&self, p: &FinitePath) -> Result<bool, BratteliError> {
        if p.len() < self.depth {
            return Err(BratteliError::Precondition(format!(
                "path of length {} is shorter than the depth {} of the clopen set",
                p.len(),
                self.depth
            )));
        }
        let key = &p.edges()[..self.depth];
        Ok(self.cylinders.binary_search_by(|c| c.edges().cmp(key)).is_ok())
    }

    /// The cylinders of depth `n ≥ n_0` making up the set.
    pub fn at_depth(&self, b: &BratteliDiagram, n: usize) -> Result<Vec<FinitePath>, BratteliError> {
        if n < self.depth {
            return Err(BratteliError::Precondition(format!("depth {n} is below n_0 = {}", self.depth)));
        }
        b.check_level(n)?;
        let mut set = BTreeSet::new();
        for c in &self.cylinders {
            extend_to(b, c, n, &mut set);
        }
        Ok(set.into_iter().collect())
    }

    pub fn complement(&self, b: &BratteliDiagram) -> Result<ClopenSet, BratteliError> {
        let level = LevelPaths::new(b, self.depth)?;
        let mut rest = BTreeSet::new();
        for p in level.paths() {
            if !self.contains(p)? {
                rest.insert(p.clone());
            }
        }
        Ok(Self::reduce(b, self.depth, rest))
    }

    pub fn union(&self, b: &BratteliDiagram, other: &ClopenSet) -> ClopenSet {
        let all: Vec<FinitePath> = self.cylinders.iter().chain(&other.cylinders).cloned().collect();
        Self::from_paths(b, &all)
    }

    pub fn is_subset(&self, b: &BratteliDiagram, other: &ClopenSet) -> Result<bool, BratteliError> {
        let n = self.depth.max(other.depth);
        for p in self.at_depth(b, n)? {
            if !other.contains(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn extend_to(b: &BratteliDiagram, p: &FinitePath, depth: usize, out: &mut BTreeSet<FinitePath>) {
    if p.len() == depth {
        out.insert(p.clone());
        return;
    }
    for e in b.out_edges(p.len(), p.end()) {
        let next = p.extend(b, e).expect("outgoing edge");
        extend_to(b, &next, depth, out);
    }
}
