use std::collections::BTreeSet;

use super::automaton::StateId;
use super::nucleus::Nucleus;
use super::table::RecursionTable;

/// One nucleus state checked at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateDepth {
    pub level: usize,
    pub state: String,
    /// Smallest relative depth at which some section has a nontrivial root
    /// permutation; the state is nontrivial on the finite subtree of depth
    /// `first_active + 1`.
    pub first_active: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionCReport {
    pub i0: usize,
    pub c0: usize,
    pub horizon: usize,
    pub pass: bool,
    /// Nontrivial states that fix the depth-`c0` subtree, as `(level, state)`.
    pub witnesses: Vec<StateDepth>,
    /// All checked states.
    pub checked: Vec<StateDepth>,
    /// Smallest `c0` that would pass on the same levels.
    pub minimal_c0: usize,
}

/// Relative depth of the first nontrivial root permutation among the
/// sections of `s`.
pub fn first_active_depth(nucleus: &Nucleus, s: StateId) -> Option<usize> {
    let mut layer: BTreeSet<StateId> = BTreeSet::from([s]);
    for depth in 0..=nucleus.len() {
        if layer.iter().any(|&t| !nucleus.perm(t).is_identity()) {
            return Some(depth);
        }
        let d = nucleus.perm(*layer.iter().next()?).degree();
        layer = layer
            .iter()
            .flat_map(|&t| (0..d).map(move |x| nucleus.next(t, x)))
            .collect();
    }
    None
}

/// Checks that every nontrivial element of `N_i`, for `i0 ≤ i ≤ horizon`,
/// acts nontrivially on the depth-`c0` subtree below level `i`.
pub fn check_assumption_c(table: &RecursionTable, nucleus: &Nucleus, i0: usize, c0: usize, horizon: usize) -> AssumptionCReport {
    let mut checked = Vec::new();
    let mut witnesses = Vec::new();
    let mut seen_keys = BTreeSet::new();
    for level in i0..=horizon {
        let key = table.key(level);
        for s in nucleus.states_at(key) {
            if nucleus.is_identity(s) {
                continue;
            }
            let first_active = first_active_depth(nucleus, s).expect("nontrivial state moves some vertex");
            let entry = StateDepth {
                level,
                state: nucleus.name(s),
                first_active,
            };
            if first_active >= c0 {
                witnesses.push(entry.clone());
            }
            if seen_keys.insert((key, s)) {
                checked.push(entry);
            }
        }
    }
    let minimal_c0 = checked.iter().map(|c| c.first_active + 1).max().unwrap_or(1);
    AssumptionCReport {
        i0,
        c0,
        horizon,
        pass: witnesses.is_empty(),
        witnesses,
        checked,
        minimal_c0,
    }
}
