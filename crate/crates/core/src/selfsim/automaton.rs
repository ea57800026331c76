//! Finite Mealy automata spanned by section words, with Moore minimization
//! and the cycle core used for nuclei.

use std::collections::{HashMap, VecDeque};

use super::table::RecursionTable;
use super::word::Word;
use super::SelfSimError;
use crate::perm::Perm;

pub type StateId = usize;

/// A section-closed set of tree automorphisms: each state has a level key,
/// a root permutation and one successor per symbol.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub(crate) keys: Vec<usize>,
    pub(crate) perms: Vec<Perm>,
    pub(crate) trans: Vec<Vec<StateId>>,
    pub(crate) words: Vec<Word>,
}

fn word_rank(w: &Word) -> (usize, usize, &Word) {
    (w.len(), w.letters().iter().filter(|l| l.inverse).count(), w)
}

impl Automaton {
    /// All sections of the seed words, with an identity state at every key.
    /// Fails once more than `limit` distinct words appear.
    pub fn closure(table: &RecursionTable, seeds: &[(usize, Word)], limit: usize) -> Result<Automaton, SelfSimError> {
        let mut index: HashMap<(usize, Word), StateId> = HashMap::new();
        let mut aut = Automaton {
            keys: Vec::new(),
            perms: Vec::new(),
            trans: Vec::new(),
            words: Vec::new(),
        };
        let mut queue = VecDeque::new();
        let all_seeds = (0..table.num_keys())
            .map(|k| (k, Word::empty()))
            .chain(seeds.iter().cloned());
        for s in all_seeds {
            if !index.contains_key(&s) {
                index.insert(s.clone(), aut.words.len());
                aut.keys.push(s.0);
                aut.words.push(s.1.clone());
                queue.push_back(s);
            }
        }
        let mut longest = 0;
        while let Some((key, w)) = queue.pop_front() {
            let id = index[&(key, w.clone())];
            let next = table.next_key(key);
            let d = table.degree_at_key(key);
            let mut row = Vec::with_capacity(d);
            for x in 0..d {
                let (_, s) = table.word_step(key, &w, x);
                let entry = (next, s);
                let sid = match index.get(&entry) {
                    Some(&sid) => sid,
                    None => {
                        let sid = aut.words.len();
                        if sid >= limit {
                            return Err(SelfSimError::StateLimit {
                                limit,
                                longest_word: longest.max(entry.1.len()),
                            });
                        }
                        longest = longest.max(entry.1.len());
                        index.insert(entry.clone(), sid);
                        aut.keys.push(entry.0);
                        aut.words.push(entry.1.clone());
                        queue.push_back(entry);
                        sid
                    }
                };
                row.push(sid);
            }
            if aut.trans.len() <= id {
                aut.trans.resize(id + 1, Vec::new());
                aut.perms.resize(id + 1, Perm::identity(0));
            }
            aut.perms[id] = table.word_perm(key, &w);
            aut.trans[id] = row;
        }
        Ok(aut)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn key(&self, s: StateId) -> usize {
        self.keys[s]
    }

    pub fn perm(&self, s: StateId) -> &Perm {
        &self.perms[s]
    }

    pub fn next(&self, s: StateId, x: usize) -> StateId {
        self.trans[s][x]
    }

    pub fn word(&self, s: StateId) -> &Word {
        &self.words[s]
    }

    /// Coarsest partition into states defining the same automorphism.
    /// Returns the class of every state.
    pub fn equivalence_classes(&self) -> Vec<usize> {
        let n = self.len();
        let mut ids: HashMap<(usize, &Perm), usize> = HashMap::new();
        let mut class: Vec<usize> = (0..n)
            .map(|s| {
                let next = ids.len();
                *ids.entry((self.keys[s], &self.perms[s])).or_insert(next)
            })
            .collect();
        let mut count = ids.len();
        loop {
            let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let refined: Vec<usize> = (0..n)
                .map(|s| {
                    let key = (class[s], self.trans[s].iter().map(|&t| class[t]).collect());
                    let next = sig.len();
                    *sig.entry(key).or_insert(next)
                })
                .collect();
            let new_count = sig.len();
            class = refined;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// The quotient by [`equivalence_classes`](Self::equivalence_classes).
    /// Each class keeps its shortest word (fewest inverse letters on ties).
    /// Returns the minimized automaton and the old-to-new state map.
    pub fn minimize(&self) -> (Automaton, Vec<StateId>) {
        let class = self.equivalence_classes();
        let m = class.iter().copied().max().map_or(0, |c| c + 1);
        let mut rep: Vec<Option<StateId>> = vec![None; m];
        for s in 0..self.len() {
            let c = class[s];
            match rep[c] {
                Some(r) if word_rank(&self.words[r]) <= word_rank(&self.words[s]) => {}
                _ => rep[c] = Some(s),
            }
        }
        let rep: Vec<StateId> = rep.into_iter().map(|r| r.expect("nonempty class")).collect();
        let min = Automaton {
            keys: rep.iter().map(|&r| self.keys[r]).collect(),
            perms: rep.iter().map(|&r| self.perms[r].clone()).collect(),
            trans: rep
                .iter()
                .map(|&r| self.trans[r].iter().map(|&t| class[t]).collect())
                .collect(),
            words: rep.iter().map(|&r| self.words[r].clone()).collect(),
        };
        (min, class)
    }

    /// States whose automorphism is the identity: those from which no
    /// non-identity permutation is reachable.
    pub fn identity_states(&self) -> Vec<bool> {
        let n = self.len();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n {
            for &t in &self.trans[s] {
                rev[t].push(s);
            }
        }
        let mut bad: Vec<bool> = (0..n).map(|s| !self.perms[s].is_identity()).collect();
        let mut stack: Vec<StateId> = (0..n).filter(|&s| bad[s]).collect();
        while let Some(t) = stack.pop() {
            for &s in &rev[t] {
                if !bad[s] {
                    bad[s] = true;
                    stack.push(s);
                }
            }
        }
        bad.into_iter().map(|b| !b).collect()
    }

    /// States reachable from a cycle (including states on cycles).
    pub fn core(&self) -> Vec<bool> {
        let n = self.len();
        let comp = self.scc();
        let mut size = HashMap::new();
        for &c in &comp {
            *size.entry(c).or_insert(0usize) += 1;
        }
        let mut in_core: Vec<bool> = (0..n)
            .map(|s| size[&comp[s]] > 1 || self.trans[s].contains(&s))
            .collect();
        let mut stack: Vec<StateId> = (0..n).filter(|&s| in_core[s]).collect();
        while let Some(s) = stack.pop() {
            for &t in &self.trans[s] {
                if !in_core[t] {
                    in_core[t] = true;
                    stack.push(t);
                }
            }
        }
        in_core
    }

    /// Restriction to a section-closed subset of states, renumbered in
    /// increasing order of old id.
    pub fn restrict(&self, keep: &[bool]) -> (Automaton, Vec<Option<StateId>>) {
        let mut map = vec![None; self.len()];
        let mut next = 0;
        for s in 0..self.len() {
            if keep[s] {
                map[s] = Some(next);
                next += 1;
            }
        }
        let pick = |s: StateId| map[s].expect("restriction must be section-closed");
        let kept: Vec<StateId> = (0..self.len()).filter(|&s| keep[s]).collect();
        let aut = Automaton {
            keys: kept.iter().map(|&s| self.keys[s]).collect(),
            perms: kept.iter().map(|&s| self.perms[s].clone()).collect(),
            trans: kept
                .iter()
                .map(|&s| self.trans[s].iter().map(|&t| pick(t)).collect())
                .collect(),
            words: kept.iter().map(|&s| self.words[s].clone()).collect(),
        };
        (aut, map)
    }

    /// Tarjan's strongly connected components (iterative).
    fn scc(&self) -> Vec<usize> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![usize::MAX; n];
        let mut counter = 0;
        let mut ncomp = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < self.trans[v].len() {
                    let w = self.trans[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::builtin;

    #[test]
    fn grigorchuk_generators_minimize_to_five_states() {
        let g = builtin::grigorchuk();
        let seeds: Vec<(usize, Word)> = (0..4).map(|i| (0, Word::gen(i))).collect();
        let aut = Automaton::closure(&g, &seeds, 1000).unwrap();
        let (min, _) = aut.minimize();
        assert_eq!(min.len(), 5);
        assert_eq!(min.identity_states().iter().filter(|&&b| b).count(), 1);
        assert!(min.core().iter().all(|&b| b));
    }

    #[test]
    fn relation_words_are_identity() {
        let g = builtin::grigorchuk();
        let seeds = vec![(0, g.parse_word("bcd").unwrap()), (0, g.parse_word("bc").unwrap())];
        let aut = Automaton::closure(&g, &seeds, 1000).unwrap();
        let id = aut.identity_states();
        let bcd = aut.words.iter().position(|w| *w == seeds[0].1).unwrap();
        let bc = aut.words.iter().position(|w| *w == seeds[1].1).unwrap();
        assert!(id[bcd]);
        assert!(!id[bc]);
    }

    #[test]
    fn state_limit_reports_failure() {
        let g = builtin::basilica();
        let w = g.parse_word("(ab)^6 a^3 b^-5").unwrap();
        assert!(matches!(
            Automaton::closure(&g, &[(0, w)], 3),
            Err(SelfSimError::StateLimit { .. })
        ));
    }
}
