use super::automaton::Automaton;
use super::expand::Expander;
use super::table::RecursionTable;
use super::word::Word;
use super::SelfSimError;
use crate::treecore::Vertex;

/// Per-level activity counts `|A_g(i)|` for `i = 0, …, horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivityBound {
    pub counts: Vec<u64>,
    pub sup: u64,
    /// False when identity certification failed somewhere and the counts
    /// are only upper bounds.
    pub exact: bool,
}

/// Exact activity counts from the minimized automaton of `w`'s sections.
/// Falls back to portrait expansion (giving upper bounds) if the section
/// automaton exceeds `state_limit`.
pub fn activity_bound(table: &RecursionTable, w: &Word, horizon: usize, state_limit: usize) -> Result<ActivityBound, SelfSimError> {
    match Automaton::closure(table, &[(0, w.clone())], state_limit) {
        Ok(aut) => {
            let (min, class) = aut.minimize();
            let identity = min.identity_states();
            let start = class[aut
                .words
                .iter()
                .zip(&aut.keys)
                .position(|(cw, &k)| k == 0 && cw == w)
                .expect("seed is a state")];
            let mut mult = vec![0u64; min.len()];
            mult[start] = 1;
            let mut counts = Vec::with_capacity(horizon + 1);
            for level in 0..=horizon {
                counts.push(
                    (0..min.len())
                        .filter(|&s| !identity[s])
                        .map(|s| mult[s])
                        .fold(0u64, u64::saturating_add),
                );
                if level == horizon {
                    break;
                }
                let mut next = vec![0u64; min.len()];
                for s in 0..min.len() {
                    if mult[s] == 0 || identity[s] {
                        continue;
                    }
                    for &t in &min.trans[s] {
                        next[t] = next[t].saturating_add(mult[s]);
                    }
                }
                mult = next;
            }
            let sup = counts.iter().copied().max().unwrap_or(0);
            Ok(ActivityBound { counts, sup, exact: true })
        }
        Err(SelfSimError::StateLimit { .. }) => {
            log::warn!("section automaton too large; counting activity by expansion");
            let mut ex = Expander::new(table);
            let p = ex.expand(w, horizon + 4);
            let mut counts = Vec::with_capacity(horizon + 1);
            let mut exact = true;
            for level in 0..=horizon {
                let r = p.activity_report(level)?;
                exact &= r.undecided.is_empty();
                counts.push((r.active.len() + r.undecided.len()) as u64);
            }
            let sup = counts.iter().copied().max().unwrap_or(0);
            Ok(ActivityBound { counts, sup, exact })
        }
        Err(e) => Err(e),
    }
}

/// `A_g(level)` as a sorted vertex list, by walking only through
/// non-identity sections.
pub fn active_vertices(table: &RecursionTable, w: &Word, level: usize, state_limit: usize) -> Result<Vec<Vertex>, SelfSimError> {
    let aut = Automaton::closure(table, &[(0, w.clone())], state_limit)?;
    let identity = aut.identity_states();
    let start = aut
        .words
        .iter()
        .zip(&aut.keys)
        .position(|(cw, &k)| k == 0 && cw == w)
        .expect("seed is a state");
    let mut frontier = vec![(Vec::new(), start)];
    for _ in 0..level {
        let mut next = Vec::new();
        for (digits, s) in frontier {
            if identity[s] {
                continue;
            }
            for (x, &t) in aut.trans[s].iter().enumerate() {
                if !identity[t] {
                    let mut d: Vec<usize> = digits.clone();
                    d.push(x);
                    next.push((d, t));
                }
            }
        }
        frontier = next;
    }
    Ok(frontier
        .into_iter()
        .filter(|(_, s)| !identity[*s])
        .map(|(d, _)| Vertex::new(d))
        .collect())
}

/// Activity at `level` read off a portrait expanded `extra` levels further.
/// Vertices whose section is trivial only within the expansion are
/// reported as undecided.
pub fn activity_by_expansion(
    table: &RecursionTable,
    w: &Word,
    level: usize,
    extra: usize,
) -> Result<crate::treecore::ActivityReport, SelfSimError> {
    let p = Expander::new(table).expand(w, level + extra);
    Ok(p.activity_report(level)?)
}
