use std::collections::HashMap;

use super::automaton::{Automaton, StateId};
use super::table::RecursionTable;
use super::word::{Letter, Word};
use super::SelfSimError;
use crate::perm::Perm;

/// The nucleus of a contracting table: a minimal section-closed set of
/// pairwise distinct automorphisms into which the sections of every element
/// eventually fall. For level-indexed tables each state carries a level
/// key, and the states with key `k` form the per-level set `N_i` for every
/// depth `i` with that key.
#[derive(Clone, Debug)]
pub struct Nucleus {
    aut: Automaton,
    identity: Vec<bool>,
    names: Vec<String>,
    products: HashMap<(StateId, StateId), StateId>,
    rounds: usize,
}

impl Nucleus {
    /// Iterates `N ← core(closure(N ∪ N·N))`, starting from the core of the
    /// generators' automaton, until the state set is stable. Each closure
    /// is minimized, so states equal as automorphisms are folded.
    pub fn compute(table: &RecursionTable, state_limit: usize) -> Result<Nucleus, SelfSimError> {
        let mut seeds: Vec<(usize, Word)> = Vec::new();
        for key in 0..table.num_keys() {
            for g in 0..table.num_generators() {
                seeds.push((key, Word::gen(g)));
                seeds.push((key, Word::letter(Letter::new(g).inv())));
            }
        }
        let first = Automaton::closure(table, &seeds, state_limit)?.minimize().0;
        let (mut current, _) = first.restrict(&first.core());
        let mut rounds = 1;
        loop {
            let mut seeds: Vec<(usize, Word)> = (0..current.len())
                .map(|s| (current.key(s), current.word(s).clone()))
                .collect();
            for s in 0..current.len() {
                for t in 0..current.len() {
                    if current.key(s) == current.key(t) {
                        seeds.push((current.key(s), current.word(s).then(current.word(t))));
                    }
                }
            }
            let closure = Automaton::closure(table, &seeds, state_limit)?;
            let (min, class) = closure.minimize();
            let core = min.core();
            let size = core.iter().filter(|&&c| c).count();
            if size > state_limit {
                return Err(SelfSimError::StateLimit {
                    limit: state_limit,
                    longest_word: (0..min.len()).map(|s| min.word(s).len()).max().unwrap_or(0),
                });
            }
            rounds += 1;
            if size == current.len() {
                let (aut, map) = min.restrict(&core);
                // Map old state ids (seed order) to restricted ids.
                let seed_class = |i: usize| -> usize {
                    let (k, ref w) = seeds[i];
                    let old = closure
                        .words
                        .iter()
                        .zip(&closure.keys)
                        .position(|(cw, &ck)| ck == k && cw == w)
                        .expect("seed is a state");
                    class[old]
                };
                let n = current.len();
                let state_of: Vec<StateId> = (0..n)
                    .map(|s| map[seed_class(s)].expect("nucleus state lies in the core"))
                    .collect();
                let mut products = HashMap::new();
                let mut i = n;
                for s in 0..n {
                    for t in 0..n {
                        if current.key(s) == current.key(t) {
                            if let Some(u) = map[seed_class(i)] {
                                products.insert((state_of[s], state_of[t]), u);
                            }
                            i += 1;
                        }
                    }
                }
                let identity = aut.identity_states();
                return Ok(Nucleus {
                    aut,
                    identity,
                    names: table.names().to_vec(),
                    products,
                    rounds,
                });
            }
            current = min.restrict(&core).0;
        }
    }

    pub fn len(&self) -> usize {
        self.aut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aut.is_empty()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn automaton(&self) -> &Automaton {
        &self.aut
    }

    pub fn key(&self, s: StateId) -> usize {
        self.aut.key(s)
    }

    pub fn perm(&self, s: StateId) -> &Perm {
        self.aut.perm(s)
    }

    pub fn next(&self, s: StateId, x: usize) -> StateId {
        self.aut.next(s, x)
    }

    pub fn word(&self, s: StateId) -> &Word {
        self.aut.word(s)
    }

    pub fn is_identity(&self, s: StateId) -> bool {
        self.identity[s]
    }

    /// The identity state at a key.
    pub fn identity_at(&self, key: usize) -> Option<StateId> {
        (0..self.len()).find(|&s| self.identity[s] && self.aut.key(s) == key)
    }

    /// States with the given key, in id order.
    pub fn states_at(&self, key: usize) -> Vec<StateId> {
        (0..self.len()).filter(|&s| self.aut.key(s) == key).collect()
    }

    /// `s·t` when the product is again a nucleus state.
    pub fn product(&self, s: StateId, t: StateId) -> Option<StateId> {
        self.products.get(&(s, t)).copied()
    }

    /// Display name of a state: `id` for the identity, otherwise its
    /// shortest word.
    pub fn name(&self, s: StateId) -> String {
        if self.identity[s] {
            "id".into()
        } else {
            self.aut.word(s).display(&self.names).to_string()
        }
    }

    pub fn state_names(&self) -> Vec<String> {
        (0..self.len()).map(|s| self.name(s)).collect()
    }

    /// The nucleus state equal to `w` at `key`, if any.
    pub fn find(&self, table: &RecursionTable, key: usize, w: &Word, state_limit: usize) -> Result<Option<StateId>, SelfSimError> {
        let mut seeds: Vec<(usize, Word)> = (0..self.len()).map(|s| (self.key(s), self.word(s).clone())).collect();
        seeds.push((key, w.clone()));
        let closure = Automaton::closure(table, &seeds, state_limit)?;
        let class = closure.equivalence_classes();
        let locate = |k: usize, word: &Word| {
            closure
                .words
                .iter()
                .zip(&closure.keys)
                .position(|(cw, &ck)| ck == k && cw == word)
                .expect("seed is a state")
        };
        let target = class[locate(key, w)];
        Ok((0..self.len()).find(|&s| class[locate(self.key(s), self.word(s))] == target))
    }

    /// Checks that every section of every state at depth ≤ `depth` is again
    /// a state. Holds by construction; exposed for tests.
    pub fn is_section_closed(&self) -> bool {
        (0..self.len()).all(|s| self.aut.trans[s].iter().all(|&t| t < self.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::builtin;

    #[test]
    fn grigorchuk_nucleus() {
        let g = builtin::grigorchuk();
        let n = Nucleus::compute(&g, 10_000).unwrap();
        let mut names = n.state_names();
        names.sort();
        assert_eq!(names, ["a", "b", "c", "d", "id"]);
        let b = (0..n.len()).find(|&s| n.name(s) == "b").unwrap();
        let c = (0..n.len()).find(|&s| n.name(s) == "c").unwrap();
        let d = (0..n.len()).find(|&s| n.name(s) == "d").unwrap();
        assert_eq!(n.product(b, c), Some(d));
    }

    #[test]
    fn gupta_sidki_nucleus() {
        for p in [3, 5] {
            let t = builtin::gupta_sidki(p).unwrap();
            let n = Nucleus::compute(&t, 10_000).unwrap();
            assert_eq!(n.len(), 2 * p - 1);
            for k in 1..p as i64 {
                let w = t.parse_word(&format!("a^{k}")).unwrap();
                assert!(n.find(&t, 0, &w, 10_000).unwrap().is_some());
                let w = t.parse_word(&format!("t^{k}")).unwrap();
                assert!(n.find(&t, 0, &w, 10_000).unwrap().is_some());
            }
            let at = t.parse_word("at").unwrap();
            assert!(n.find(&t, 0, &at, 10_000).unwrap().is_none());
        }
    }

    #[test]
    fn basilica_and_trivial() {
        let n = Nucleus::compute(&builtin::basilica(), 10_000).unwrap();
        assert_eq!(n.len(), 7);
        let n = Nucleus::compute(&builtin::trivial(), 10_000).unwrap();
        assert_eq!(n.state_names(), ["id"]);
    }

    #[test]
    fn omega_nucleus_per_level() {
        let t = builtin::by_name("grigorchuk_omega:(012)").unwrap();
        let n = Nucleus::compute(&t, 10_000).unwrap();
        for key in 0..3 {
            assert_eq!(n.states_at(key).len(), 5);
        }
    }
}
