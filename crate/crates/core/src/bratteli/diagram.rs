use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::paths::FinitePath;
use super::BratteliError;

/// A Bratteli diagram truncated at level `horizon`: `levels[i] = |V_i|` with
/// `levels[0] = 1`, and `edges[i − 1]` the multiset `E_i` of
/// `(source ∈ V_{i−1}, range ∈ V_i)` pairs. Edges are referred to by their
/// index inside `E_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct BratteliDiagram {
    levels: Vec<usize>,
    edges: Vec<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
struct RawDiagram {
    levels: Vec<usize>,
    edges: Vec<Vec<(usize, usize)>>,
}

impl TryFrom<RawDiagram> for BratteliDiagram {
    type Error = BratteliError;

    fn try_from(raw: RawDiagram) -> Result<Self, Self::Error> {
        BratteliDiagram::new(raw.levels, raw.edges)
    }
}

/// Result of [`BratteliDiagram::is_simple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    pub horizon: usize,
    pub simple: bool,
    /// For each level `n < horizon`, the least `m ≤ horizon` with every
    /// pair in `V_n × V_m` connected.
    pub connecting_level: Vec<Option<usize>>,
    /// `(n, v, w)` with `v ∈ V_n`, `w ∈ V_horizon` not connected.
    pub witness: Option<(usize, usize, usize)>,
}

/// Result of [`BratteliDiagram::markov_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovReport {
    pub prefix_len: usize,
    pub m: usize,
    pub n: usize,
    /// `max_{w ∈ V_m} d(v0, w)`.
    pub max_degree_m: BigUint,
    /// Least value of `N(v; prefix) / d(v0, v)` over `v ∈ V_n`.
    pub min_ratio: BigRational,
    pub holds: bool,
}

impl BratteliDiagram {
    pub fn new(levels: Vec<usize>, edges: Vec<Vec<(usize, usize)>>) -> Result<Self, BratteliError> {
        let bad = |msg: String| Err(BratteliError::InvalidDiagram(msg));
        if levels.first() != Some(&1) {
            return bad("level 0 must consist of the single root vertex".into());
        }
        if edges.len() + 1 != levels.len() {
            return bad(format!("{} vertex levels need {} edge levels, got {}", levels.len(), levels.len() - 1, edges.len()));
        }
        for (i, &size) in levels.iter().enumerate() {
            if size == 0 {
                return bad(format!("level {i} is empty"));
            }
        }
        for (i, level) in edges.iter().enumerate() {
            let (src, dst) = (levels[i], levels[i + 1]);
            let mut out = vec![false; src];
            let mut inc = vec![false; dst];
            for &(s, r) in level {
                if s >= src || r >= dst {
                    return bad(format!("edge ({s}, {r}) of level {} is out of range", i + 1));
                }
                out[s] = true;
                inc[r] = true;
            }
            if let Some(s) = out.iter().position(|&b| !b) {
                return bad(format!("vertex {s} of level {i} has no outgoing edge"));
            }
            if let Some(r) = inc.iter().position(|&b| !b) {
                return bad(format!("vertex {r} of level {} has no incoming edge", i + 1));
            }
        }
        Ok(BratteliDiagram { levels, edges })
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.levels
    }

    pub fn level_size(&self, i: usize) -> usize {
        self.levels[i]
    }

    /// The edge set `E_i`, `1 ≤ i ≤ horizon`.
    pub fn edges(&self, i: usize) -> &[(usize, usize)] {
        &self.edges[i - 1]
    }

    pub(crate) fn check_level(&self, n: usize) -> Result<(), BratteliError> {
        if n > self.horizon() {
            return Err(BratteliError::Horizon {
                requested: n,
                horizon: self.horizon(),
            });
        }
        Ok(())
    }

    /// End vertex of a path given by edge indices, or an error if the edges
    /// do not chain.
    pub(crate) fn end_of(&self, edges: &[usize]) -> Result<usize, BratteliError> {
        self.check_level(edges.len())?;
        let mut at = 0;
        for (j, &e) in edges.iter().enumerate() {
            let (s, r) = *self.edges[j]
                .get(e)
                .ok_or_else(|| BratteliError::InvalidPath(format!("edge {e} does not exist at level {}", j + 1)))?;
            if s != at {
                return Err(BratteliError::InvalidPath(format!(
                    "edge {e} of level {} starts at {s}, not at {at}",
                    j + 1
                )));
            }
            at = r;
        }
        Ok(at)
    }

    /// Indices of the edges of `E_{i+1}` leaving vertex `v ∈ V_i`.
    pub(crate) fn out_edges(&self, i: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[i]
            .iter()
            .enumerate()
            .filter(move |(_, &(s, _))| s == v)
            .map(|(e, _)| e)
    }

    /// `|E(w, v)|` for `w ∈ V_a`, `v ∈ V_b`, `a ≤ b`, as a `|V_a| × |V_b|`
    /// matrix.
    pub fn transfer(&self, a: usize, b: usize) -> Result<Vec<Vec<BigUint>>, BratteliError> {
        self.check_level(b)?;
        if a > b {
            return Err(BratteliError::Precondition(format!("level {a} lies below level {b}")));
        }
        let mut cur: Vec<Vec<BigUint>> = (0..self.levels[a])
            .map(|w| (0..self.levels[a]).map(|x| if x == w { BigUint::one() } else { BigUint::zero() }).collect())
            .collect();
        for i in a..b {
            cur = cur
                .into_iter()
                .map(|row| {
                    let mut next = vec![BigUint::zero(); self.levels[i + 1]];
                    for &(s, r) in &self.edges[i] {
                        next[r] += &row[s];
                    }
                    next
                })
                .collect();
        }
        Ok(cur)
    }

    /// `d(v0, v)` for every `v ∈ V_n`.
    pub fn path_count(&self, n: usize) -> Result<Vec<BigUint>, BratteliError> {
        Ok(self.transfer(0, n)?.swap_remove(0))
    }

    /// `(v, w) ∈ V_a × V_b` with no path from `v` to `w`, if any.
    pub fn first_disconnected(&self, a: usize, b: usize) -> Result<Option<(usize, usize)>, BratteliError> {
        let t = self.transfer(a, b)?;
        for (v, row) in t.iter().enumerate() {
            if let Some(w) = row.iter().position(|c| c.is_zero()) {
                return Ok(Some((v, w)));
            }
        }
        Ok(None)
    }

    /// The least `m`, `a < m ≤ horizon`, with every pair in `V_a × V_m`
    /// connected.
    pub fn connecting_level(&self, a: usize, horizon: usize) -> Option<usize> {
        let horizon = horizon.min(self.horizon());
        (a + 1..=horizon).find(|&m| matches!(self.first_disconnected(a, m), Ok(None)))
    }

    /// Simplicity of the truncation at `horizon`: every level `n < horizon`
    /// is fully connected to some level `m ≤ horizon`.
    pub fn is_simple(&self, horizon: usize) -> Result<SimplicityReport, BratteliError> {
        if horizon < 2 {
            return Err(BratteliError::Precondition(format!("simplicity needs horizon at least 2, got {horizon}")));
        }
        self.check_level(horizon)?;
        let connecting_level: Vec<Option<usize>> = (0..horizon).map(|n| self.connecting_level(n, horizon)).collect();
        let mut witness = None;
        for (n, m) in connecting_level.iter().enumerate() {
            if m.is_none() {
                let (v, w) = self.first_disconnected(n, horizon)?.expect("some pair is disconnected");
                witness = Some((n, v, w));
                break;
            }
        }
        Ok(SimplicityReport {
            horizon,
            simple: witness.is_none(),
            connecting_level,
            witness,
        })
    }

    /// The diagram whose level `j` is level `cuts[j]` of `self` and whose
    /// edges are the paths between consecutive cuts. Level 0 is always
    /// kept; listing it in `cuts` is optional.
    pub fn telescope(&self, cuts: &[usize]) -> Result<BratteliDiagram, BratteliError> {
        if cuts.is_empty() {
            return Err(BratteliError::Precondition("empty cut list".into()));
        }
        let mut levels_kept = Vec::with_capacity(cuts.len() + 1);
        if cuts[0] != 0 {
            levels_kept.push(0);
        }
        levels_kept.extend_from_slice(cuts);
        if levels_kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BratteliError::Precondition(format!("cut levels {cuts:?} are not strictly increasing")));
        }
        self.check_level(*levels_kept.last().expect("nonempty"))?;
        let mut edges = Vec::new();
        for w in levels_kept.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut level = Vec::new();
            for s in 0..self.levels[a] {
                let mut stack = vec![(a, s)];
                let mut ends = Vec::new();
                // depth-first in increasing edge order keeps paths lexicographic
                while let Some((i, v)) = stack.pop() {
                    if i == b {
                        ends.push(v);
                        continue;
                    }
                    let outs: Vec<usize> = self.out_edges(i, v).collect();
                    for &e in outs.iter().rev() {
                        stack.push((i + 1, self.edges[i][e].1));
                    }
                }
                level.extend(ends.into_iter().map(|r| (s, r)));
            }
            edges.push(level);
        }
        let levels = levels_kept.iter().map(|&l| self.levels[l]).collect();
        BratteliDiagram::new(levels, edges)
    }

    /// The truncation at level `n`.
    pub fn truncate(&self, n: usize) -> Result<BratteliDiagram, BratteliError> {
        self.check_level(n)?;
        Ok(BratteliDiagram {
            levels: self.levels[..=n].to_vec(),
            edges: self.edges[..n].to_vec(),
        })
    }

    /// `N(v; prefix)`: the number of `n`-paths ending at `v` that start with
    /// `prefix`.
    pub fn count_with_prefix(&self, prefix: &FinitePath, n: usize, v: usize) -> Result<BigUint, BratteliError> {
        self.check_path(prefix)?;
        let k = prefix.len();
        if k > n {
            return Err(BratteliError::Precondition(format!("prefix of length {k} is longer than level {n}")));
        }
        self.check_level(n)?;
        if v >= self.levels[n] {
            return Err(BratteliError::Precondition(format!("vertex {v} is not in level {n}")));
        }
        Ok(self.transfer(k, n)?[prefix.end()][v].clone())
    }

    /// Checks `N(v; prefix) / d(v0, v) ≥ 1 / max_{w ∈ V_m} d(v0, w)` over
    /// `v ∈ V_n`, which holds when `V_k` and `V_m` are fully connected and
    /// `n ≥ m > k`.
    pub fn markov_check(&self, prefix: &FinitePath, m: usize, n: usize) -> Result<MarkovReport, BratteliError> {
        self.check_path(prefix)?;
        let k = prefix.len();
        if !(k < m && m <= n) {
            return Err(BratteliError::Precondition(format!("need {k} < m = {m} ≤ n = {n}")));
        }
        self.check_level(n)?;
        if let Some((v, w)) = self.first_disconnected(k, m)? {
            return Err(BratteliError::Precondition(format!(
                "vertex {v} of level {k} is not connected to vertex {w} of level {m}"
            )));
        }
        let max_degree_m = self.path_count(m)?.into_iter().max().expect("nonempty level");
        let totals = self.path_count(n)?;
        let through = &self.transfer(k, n)?[prefix.end()];
        let min_ratio = totals
            .iter()
            .zip(through)
            .map(|(d, c)| BigRational::new(c.clone().into(), d.clone().into()))
            .min()
            .expect("nonempty level");
        let holds = min_ratio >= BigRational::new(1.into(), max_degree_m.clone().into());
        Ok(MarkovReport {
            prefix_len: k,
            m,
            n,
            max_degree_m,
            min_ratio,
            holds,
        })
    }

    pub(crate) fn check_path(&self, p: &FinitePath) -> Result<(), BratteliError> {
        if self.end_of(p.edges())? != p.end() {
            return Err(BratteliError::InvalidPath("cached end vertex does not match the diagram".into()));
        }
        Ok(())
    }
}
