//! Stabilizer chains built by the Schreier–Sims algorithm.
//!
//! Level `l` of a chain holds generators of the pointwise stabilizer of the
//! first `l` base points and a Schreier tree for the orbit of base point
//! `l`. Coset representatives are read off the tree on demand.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::Perm;

#[derive(Clone, Debug)]
pub(crate) struct ChainLevel {
    pub(crate) base: usize,
    pub(crate) gens: Vec<Perm>,
    inv: Vec<Perm>,
    pub(crate) orbit: Vec<usize>,
    /// Orbit point `y ↦ (s, x)` with `y = x·gens[s]`; the base maps to itself.
    tree: HashMap<u32, (u32, u32)>,
    /// Number of generators already paired with each orbit point as a
    /// Schreier generator.
    checked: Vec<usize>,
}

const ROOT: u32 = u32::MAX;

impl ChainLevel {
    fn new(base: usize) -> ChainLevel {
        ChainLevel {
            base,
            gens: Vec::new(),
            inv: Vec::new(),
            orbit: vec![base],
            tree: HashMap::from([(base as u32, (ROOT, base as u32))]),
            checked: vec![0],
        }
    }

    pub(crate) fn contains_point(&self, y: usize) -> bool {
        self.tree.contains_key(&(y as u32))
    }

    fn add_gen(&mut self, g: Perm) {
        let s = self.gens.len();
        self.inv.push(g.inverse());
        self.gens.push(g);
        let old = self.orbit.len();
        for p in 0..old {
            let x = self.orbit[p];
            self.visit(x, s);
        }
        let mut q = old;
        while q < self.orbit.len() {
            let x = self.orbit[q];
            for t in 0..self.gens.len() {
                self.visit(x, t);
            }
            q += 1;
        }
    }

    fn visit(&mut self, x: usize, s: usize) {
        let y = self.gens[s].image(x) as u32;
        if let std::collections::hash_map::Entry::Vacant(e) = self.tree.entry(y) {
            e.insert((s as u32, x as u32));
            self.orbit.push(y as usize);
            self.checked.push(0);
        }
    }

    /// `g · u_y⁻¹` where `u_y` is the coset representative mapping the base
    /// to `y`.
    fn strip(&self, mut g: Perm, mut y: usize) -> Perm {
        loop {
            let (s, x) = self.tree[&(y as u32)];
            if s == ROOT {
                return g;
            }
            g = g.then(&self.inv[s as usize]);
            y = x as usize;
        }
    }

    /// The coset representative `u_y` (base ↦ y).
    pub(crate) fn rep(&self, degree: usize, mut y: usize) -> Perm {
        let mut path = Vec::new();
        loop {
            let (s, x) = self.tree[&(y as u32)];
            if s == ROOT {
                break;
            }
            path.push(s as usize);
            y = x as usize;
        }
        path.iter()
            .rev()
            .fold(Perm::identity(degree), |acc, &s| acc.then(&self.gens[s]))
    }

    fn conjugate(&self, h: &Perm) -> ChainLevel {
        let gens: Vec<Perm> = self.gens.iter().map(|g| g.conjugate_by(h)).collect();
        ChainLevel {
            base: h.image(self.base),
            inv: gens.iter().map(Perm::inverse).collect(),
            gens,
            orbit: self.orbit.iter().map(|&x| h.image(x)).collect(),
            tree: self
                .tree
                .iter()
                .map(|(&y, &(s, x))| (h.image(y as usize) as u32, (s, h.image(x as usize) as u32)))
                .collect(),
            checked: self.checked.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Chain {
    pub(crate) degree: usize,
    pub(crate) levels: Vec<ChainLevel>,
}

impl Chain {
    pub(crate) fn new(degree: usize, base_prefix: &[usize]) -> Chain {
        Chain {
            degree,
            levels: base_prefix.iter().map(|&b| ChainLevel::new(b)).collect(),
        }
    }

    pub(crate) fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub(crate) fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// at which stripping stopped (`levels.len()` if it passed every level).
    pub(crate) fn sift(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let y = g.image(level.base);
            if !level.contains_point(y) {
                return (g, l);
            }
            g = level.strip(g, y);
        }
        (g, self.levels.len())
    }

    pub(crate) fn contains(&self, g: &Perm) -> bool {
        let (r, j) = self.sift(g, 0);
        j == self.levels.len() && r.is_identity()
    }

    /// Adds `h`, which fixes the first `from` base points, to levels
    /// `from..=j`, opening a new level when `j` is past the end.
    fn insert(&mut self, h: Perm, from: usize, j: usize) {
        if j == self.levels.len() {
            let b = h.first_moved().expect("nontrivial residue");
            self.levels.push(ChainLevel::new(b));
        }
        for l in from..=j {
            self.levels[l].add_gen(h.clone());
        }
    }

    /// Adds a generator and restores completeness. Returns false if `g` was
    /// already a member.
    pub(crate) fn add_generator(&mut self, g: &Perm) -> bool {
        let (h, j) = self.sift(g, 0);
        if j == self.levels.len() && h.is_identity() {
            return false;
        }
        self.insert(h, 0, j);
        self.complete(j);
        true
    }

    /// Deterministic Schreier–Sims: every Schreier generator of every level
    /// is sifted through the levels below it, in orbit order then generator
    /// order.
    fn complete(&mut self, top: usize) {
        let mut i = top.min(self.levels.len().saturating_sub(1)) as isize;
        while i >= 0 {
            let l = i as usize;
            match self.next_residue(l) {
                Some((h, j)) => {
                    self.insert(h, l + 1, j);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn next_residue(&mut self, l: usize) -> Option<(Perm, usize)> {
        let degree = self.degree;
        let mut p = 0;
        while p < self.levels[l].orbit.len() {
            let level = &self.levels[l];
            if level.checked[p] < level.gens.len() {
                let beta = level.orbit[p];
                let u = level.rep(degree, beta);
                for s in level.checked[p]..level.gens.len() {
                    self.levels[l].checked[p] = s + 1;
                    let level = &self.levels[l];
                    let y = level.gens[s].image(beta);
                    if level.tree[&(y as u32)] == (s as u32, beta as u32) {
                        continue;
                    }
                    let schreier = level.strip(u.then(&level.gens[s]), y);
                    let (h, j) = self.sift(&schreier, l + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        return Some((h, j));
                    }
                }
            }
            p += 1;
        }
        None
    }

    /// Builds a chain for `⟨gens⟩` when its order is known in advance, by
    /// sifting random elements until the orbit lengths multiply to the
    /// order. Falls back to the deterministic algorithm if progress stalls.
    pub(crate) fn with_known_order(degree: usize, gens: &[Perm], base_prefix: &[usize], order: &BigUint) -> Chain {
        let mut chain = Chain::new(degree, base_prefix);
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            let (h, j) = chain.sift(g, 0);
            if j < chain.levels.len() || !h.is_identity() {
                chain.insert(h, 0, j);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ degree as u64);
        let mut pool = RandomProducts::new(&gens, &mut rng);
        let mut stall = 0;
        while chain.order() < *order {
            let r = pool.next(&mut rng);
            let (h, j) = chain.sift(&r, 0);
            if j < chain.levels.len() || !h.is_identity() {
                chain.insert(h, 0, j);
                stall = 0;
            } else {
                stall += 1;
                if stall > 200 {
                    log::debug!("random Schreier-Sims stalled; completing deterministically");
                    chain.complete(chain.levels.len());
                    break;
                }
            }
        }
        chain
    }

    pub(crate) fn conjugate(&self, h: &Perm) -> Chain {
        Chain {
            degree: self.degree,
            levels: self.levels.iter().map(|l| l.conjugate(h)).collect(),
        }
    }
}

/// Product-replacement generator of pseudo-random group elements.
struct RandomProducts {
    slots: Vec<Perm>,
    acc: Perm,
}

impl RandomProducts {
    fn new(gens: &[Perm], rng: &mut impl Rng) -> RandomProducts {
        let n = gens.len().max(10);
        let slots = (0..n).map(|k| gens[k % gens.len()].clone()).collect();
        let mut pool = RandomProducts {
            slots,
            acc: Perm::identity(gens[0].degree()),
        };
        for _ in 0..50 {
            pool.next(rng);
        }
        pool
    }

    fn next(&mut self, rng: &mut impl Rng) -> Perm {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        self.slots[i] = if rng.gen_bool(0.5) {
            self.slots[i].then(&other)
        } else {
            other.then(&self.slots[i])
        };
        self.acc = self.acc.then(&self.slots[i]);
        self.acc.clone()
    }
}
