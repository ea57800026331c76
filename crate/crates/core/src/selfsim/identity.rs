//! The word problem by exploration of section words.
//!
//! A word acts trivially iff every section has a trivial root permutation.
//! The sections of a word in a contracting group range over a finite set,
//! so a breadth-first search over them either finds a moved vertex or
//! exhausts the set and proves the identity.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::automaton::{Automaton, StateId};
use super::nucleus::Nucleus;
use super::table::RecursionTable;
use super::word::{Letter, Word};
use super::SelfSimError;
use crate::perm::Perm;
use crate::treecore::Vertex;

/// Answer of [`WordSolver::is_identity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Identity,
    /// A vertex moved by the word.
    NotIdentity(Vertex),
    /// The search budget ran out before the sections were exhausted.
    Inconclusive { explored: usize },
}

impl IdentityVerdict {
    pub fn is_identity(&self) -> bool {
        matches!(self, IdentityVerdict::Identity)
    }
}

/// Finite automaton of generator and nucleus states with a partial
/// multiplication table, used to keep section words short.
#[derive(Clone, Debug)]
struct Machine {
    aut: Automaton,
    identity: Vec<bool>,
    letter: Vec<Vec<StateId>>,
    mult: HashMap<(StateId, StateId), StateId>,
}

impl Machine {
    fn build(table: &RecursionTable, nucleus: Option<&Nucleus>, limit: usize) -> Result<Machine, SelfSimError> {
        let mut base: Vec<(usize, Word)> = Vec::new();
        for key in 0..table.num_keys() {
            for g in 0..table.num_generators() {
                base.push((key, Word::gen(g)));
                base.push((key, Word::letter(Letter::new(g).inv())));
            }
        }
        if let Some(n) = nucleus {
            base.extend((0..n.len()).map(|s| (n.key(s), n.word(s).clone())));
        }
        let gens = Automaton::closure(table, &base, limit)?.minimize().0;
        let states: Vec<(usize, Word)> = (0..gens.len()).map(|s| (gens.key(s), gens.word(s).clone())).collect();
        let mut seeds = states.clone();
        seeds.extend(base.iter().cloned());
        for (ks, ws) in &states {
            for (kt, wt) in &states {
                if ks == kt {
                    seeds.push((*ks, ws.then(wt)));
                }
            }
        }
        let closure = Automaton::closure(table, &seeds, limit.saturating_mul(8))?;
        let class = closure.equivalence_classes();
        let mut pos: HashMap<(usize, &Word), usize> = HashMap::new();
        for (i, (k, w)) in closure.keys.iter().zip(&closure.words).enumerate() {
            pos.insert((*k, w), i);
        }
        let class_of = |k: usize, w: &Word| class[pos[&(k, w)]];
        let mut by_class: HashMap<usize, StateId> = HashMap::new();
        for (s, (k, w)) in states.iter().enumerate() {
            by_class.entry(class_of(*k, w)).or_insert(s);
        }
        let mut mult = HashMap::new();
        for (s, (ks, ws)) in states.iter().enumerate() {
            for (t, (kt, wt)) in states.iter().enumerate() {
                if ks == kt {
                    if let Some(&u) = by_class.get(&class_of(*ks, &ws.then(wt))) {
                        mult.insert((s, t), u);
                    }
                }
            }
        }
        let find = |k: usize, w: &Word| -> StateId {
            let c = class_of(k, w);
            by_class[&c]
        };
        let letter = (0..table.num_keys())
            .map(|key| {
                (0..table.num_generators())
                    .flat_map(|g| {
                        [
                            find(key, &Word::gen(g)),
                            find(key, &Word::letter(Letter::new(g).inv())),
                        ]
                    })
                    .collect()
            })
            .collect();
        let identity = gens.identity_states();
        Ok(Machine {
            aut: gens,
            identity,
            letter,
            mult,
        })
    }

    fn letter_state(&self, key: usize, l: Letter) -> StateId {
        self.letter[key][2 * l.gen + usize::from(l.inverse)]
    }

    /// Pushes `s` onto a reduced sequence, merging with the top while the
    /// product is known.
    fn push(&self, seq: &mut Vec<StateId>, mut s: StateId) {
        loop {
            if self.identity[s] {
                return;
            }
            match seq.last().and_then(|&t| self.mult.get(&(t, s))) {
                Some(&u) => {
                    seq.pop();
                    s = u;
                }
                None => {
                    seq.push(s);
                    return;
                }
            }
        }
    }
}

trait Explorable: Clone + Eq + Hash {
    fn perm(&self, solver: &WordSolver) -> Perm;
    fn sections(&self, solver: &WordSolver) -> Vec<Self>;
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct RawState(usize, Word);

impl Explorable for RawState {
    fn perm(&self, solver: &WordSolver) -> Perm {
        solver.table.word_perm(self.0, &self.1)
    }

    fn sections(&self, solver: &WordSolver) -> Vec<Self> {
        let t = solver.table;
        let next = t.next_key(self.0);
        (0..t.degree_at_key(self.0))
            .map(|x| RawState(next, t.word_step(self.0, &self.1, x).1))
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct MachineState(usize, Vec<StateId>);

impl Explorable for MachineState {
    fn perm(&self, solver: &WordSolver) -> Perm {
        let m = solver.machine.as_ref().expect("machine mode");
        let d = solver.table.degree_at_key(self.0);
        self.1.iter().fold(Perm::identity(d), |acc, &s| acc.then(m.aut.perm(s)))
    }

    fn sections(&self, solver: &WordSolver) -> Vec<Self> {
        let m = solver.machine.as_ref().expect("machine mode");
        let next = solver.table.next_key(self.0);
        (0..solver.table.degree_at_key(self.0))
            .map(|x| {
                let mut y = x;
                let mut seq = Vec::with_capacity(self.1.len());
                for &s in &self.1 {
                    m.push(&mut seq, m.aut.next(s, y));
                    y = m.aut.perm(s).image(y);
                }
                MachineState(next, seq)
            })
            .collect()
    }
}

/// Decides whether words act trivially.
pub struct WordSolver<'a> {
    table: &'a RecursionTable,
    machine: Option<Machine>,
}

impl<'a> WordSolver<'a> {
    /// Solver working on freely reduced section words only.
    pub fn raw(table: &'a RecursionTable) -> Self {
        WordSolver { table, machine: None }
    }

    /// Solver that rewrites section words as products of generator and
    /// nucleus states, merging adjacent states whose product is known.
    pub fn with_nucleus(table: &'a RecursionTable, nucleus: &Nucleus, limit: usize) -> Result<Self, SelfSimError> {
        Ok(WordSolver {
            table,
            machine: Some(Machine::build(table, Some(nucleus), limit)?),
        })
    }

    pub fn uses_nucleus(&self) -> bool {
        self.machine.is_some()
    }

    /// Explores at most `budget` distinct section states.
    pub fn is_identity(&self, w: &Word, budget: usize) -> IdentityVerdict {
        self.is_identity_at(0, w, budget)
    }

    /// Same as [`is_identity`](Self::is_identity) for `w` acting below a
    /// vertex of depth `level`.
    pub fn is_identity_at(&self, level: usize, w: &Word, budget: usize) -> IdentityVerdict {
        let key = self.table.key(level);
        match &self.machine {
            None => self.explore(RawState(key, w.clone()), budget),
            Some(m) => {
                let mut seq = Vec::new();
                for &l in w.letters() {
                    m.push(&mut seq, m.letter_state(key, l));
                }
                self.explore(MachineState(key, seq), budget)
            }
        }
    }

    fn explore<S: Explorable>(&self, start: S, budget: usize) -> IdentityVerdict {
        let mut seen: HashMap<S, usize> = HashMap::new();
        let mut parent: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone(), 0);
        parent.push((usize::MAX, 0));
        queue.push_back((start, 0usize));
        while let Some((s, id)) = queue.pop_front() {
            let perm = s.perm(self);
            if let Some(x) = perm.first_moved() {
                let mut digits = vec![x];
                let mut cur = id;
                while parent[cur].0 != usize::MAX {
                    digits.push(parent[cur].1);
                    cur = parent[cur].0;
                }
                digits.reverse();
                return IdentityVerdict::NotIdentity(Vertex::new(digits));
            }
            for (x, t) in s.sections(self).into_iter().enumerate() {
                if !seen.contains_key(&t) {
                    if seen.len() >= budget {
                        return IdentityVerdict::Inconclusive { explored: seen.len() };
                    }
                    let tid = parent.len();
                    parent.push((id, x));
                    seen.insert(t.clone(), tid);
                    queue.push_back((t, tid));
                }
            }
        }
        IdentityVerdict::Identity
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::builtin;
    use crate::selfsim::expand::expand;

    #[test]
    fn grigorchuk_relations() {
        let g = builtin::grigorchuk();
        let n = Nucleus::compute(&g, 10_000).unwrap();
        let fast = WordSolver::with_nucleus(&g, &n, 10_000).unwrap();
        let raw = WordSolver::raw(&g);
        for rel in ["aa", "bb", "cc", "dd", "bcd", "(ad)^4", "1", "(ac)^8", "(ab)^16"] {
            let w = g.parse_word(rel).unwrap();
            assert_eq!(fast.is_identity(&w, 100_000), IdentityVerdict::Identity, "{rel}");
            assert_eq!(raw.is_identity(&w, 100_000), IdentityVerdict::Identity, "{rel}");
        }
        let ab = g.parse_word("ab").unwrap();
        assert_eq!(fast.is_identity(&ab, 100), IdentityVerdict::NotIdentity(Vertex::new(vec![0])));
        let ad2 = g.parse_word("(ad)^2").unwrap();
        match fast.is_identity(&ad2, 1000) {
            IdentityVerdict::NotIdentity(v) => {
                let p = expand(&g, &ad2, v.depth());
                assert_ne!(p.act(&v).unwrap(), v);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let g = builtin::grigorchuk();
        let w = g.parse_word("(ad)^4").unwrap();
        assert!(matches!(WordSolver::raw(&g).is_identity(&w, 2), IdentityVerdict::Inconclusive { .. }));
    }
}
