use std::collections::HashMap;
use std::sync::Arc;

use super::table::RecursionTable;
use super::word::Word;
use crate::treecore::portrait::{branch, trivial, Node};
use crate::treecore::Portrait;

/// Expands words into portraits, sharing the portraits of repeated section
/// words. The empty word expands to a certified identity; every other word
/// is certified only through the arithmetic of its sections.
pub struct Expander<'a> {
    table: &'a RecursionTable,
    memo: HashMap<(usize, usize, Word), Arc<Node>>,
}

impl<'a> Expander<'a> {
    pub fn new(table: &'a RecursionTable) -> Self {
        Expander {
            table,
            memo: HashMap::new(),
        }
    }

    pub fn table(&self) -> &RecursionTable {
        self.table
    }

    /// Portrait of `w` to the given depth.
    pub fn expand(&mut self, w: &Word, depth: usize) -> Portrait {
        self.expand_at(0, w, depth)
    }

    /// Portrait of `w` acting on the subtree below a vertex of depth
    /// `level`.
    pub fn expand_at(&mut self, level: usize, w: &Word, depth: usize) -> Portrait {
        let node = self.node(self.table.key(level), w, depth);
        Portrait::from_node(self.table.valency().shift(level), depth, node)
    }

    fn node(&mut self, key: usize, w: &Word, rem: usize) -> Arc<Node> {
        if w.is_empty() {
            return trivial(true);
        }
        if rem == 0 {
            return trivial(false);
        }
        if let Some(n) = self.memo.get(&(key, rem, w.clone())) {
            return n.clone();
        }
        let next = self.table.next_key(key);
        let d = self.table.degree_at_key(key);
        let children = (0..d)
            .map(|x| {
                let (_, s) = self.table.word_step(key, w, x);
                self.node(next, &s, rem - 1)
            })
            .collect();
        let node = branch(self.table.word_perm(key, w), children);
        self.memo.insert((key, rem, w.clone()), node.clone());
        node
    }
}

/// One-shot expansion of `w` to `depth`.
pub fn expand(table: &RecursionTable, w: &Word, depth: usize) -> Portrait {
    Expander::new(table).expand(w, depth)
}
