use super::group::PermGroup;
use super::PermGroupError;
use crate::perm::Perm;
use crate::selfsim::{Expander, RecursionTable, Word};
use crate::treecore::{Level, Vertex};

/// `Γ_n = π_n(Γ)`: the action of a recursion table's group on level `n`,
/// with level-`n` points indexed lexicographically.
#[derive(Clone, Debug)]
pub struct LevelQuotient {
    level: Level,
    group: PermGroup,
    images: Vec<Perm>,
    inverses: Vec<Perm>,
}

impl LevelQuotient {
    pub fn new(table: &RecursionTable, n: usize) -> Result<LevelQuotient, PermGroupError> {
        let level = Level::new(table.valency(), n)?;
        let mut ex = Expander::new(table);
        let images = (0..table.num_generators())
            .map(|g| ex.expand(&Word::gen(g), n).perm_on_level(n))
            .collect::<Result<Vec<_>, _>>()?;
        let group = PermGroup::new(level.size(), images.clone())?;
        Ok(LevelQuotient {
            level,
            inverses: images.iter().map(Perm::inverse).collect(),
            images,
            group,
        })
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn depth(&self) -> usize {
        self.level.depth()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn generator_image(&self, g: usize) -> &Perm {
        &self.images[g]
    }

    /// `π_n(w)`.
    pub fn word_image(&self, w: &Word) -> Perm {
        w.letters().iter().fold(Perm::identity(self.level.size()), |acc, l| {
            acc.then(if l.inverse { &self.inverses[l.gen] } else { &self.images[l.gen] })
        })
    }

    /// Level-`n` points below any of `vertices`.
    pub fn leaves_below(&self, vertices: &[Vertex]) -> Vec<usize> {
        let mut out: Vec<usize> = vertices.iter().flat_map(|v| self.level.subtree_range(v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `v·g` for a vertex of depth at most `n`.
    pub fn vertex_image(&self, g: &Perm, v: &Vertex) -> Vertex {
        let start = self.level.subtree_range(v).start;
        let leaf = self.level.vertex_at(g.image(start));
        leaf.prefix(v.depth())
    }

    /// Whether `g` fixes `v` and acts trivially on the subtree below it.
    pub fn fixes_subtree(&self, g: &Perm, v: &Vertex) -> bool {
        self.level.subtree_range(v).all(|x| g.fixes(x))
    }

    /// Whether the section `g_v` is nontrivial on the levels below `v`
    /// available in this quotient.
    pub fn section_is_nontrivial(&self, g: &Perm, v: &Vertex) -> bool {
        let range = self.level.subtree_range(v);
        let target = self.level.subtree_range(&self.vertex_image(g, v));
        range
            .clone()
            .any(|x| g.image(x) - target.start != x - range.start)
    }

    /// Elements of `group` (a subgroup of this quotient) fixing each vertex
    /// in `vertices`, which may lie on any level up to `n`.
    pub fn vertex_stabilizer(&self, group: &PermGroup, vertices: &[Vertex]) -> Result<PermGroup, PermGroupError> {
        let n = self.level.size();
        let mut depths: Vec<usize> = Vec::new();
        for v in vertices {
            v.validate(self.level.valency())?;
            if v.depth() > self.depth() {
                return Err(crate::treecore::TreeError::TooDeep {
                    vertex: v.depth(),
                    depth: self.depth(),
                }
                .into());
            }
            if v.depth() < self.depth() && !depths.contains(&v.depth()) {
                depths.push(v.depth());
            }
        }
        if depths.is_empty() {
            let points: Vec<usize> = vertices.iter().map(|v| self.level.index_of(v)).collect();
            return Ok(group.pointwise_stabilizer(&points));
        }
        // Act on level n and on each coarser level involved at once.
        let mut offsets = Vec::new();
        let mut total = n;
        for &k in &depths {
            offsets.push(total);
            total += self.level.size_at(k);
        }
        let extend = |g: &Perm| -> Perm {
            let mut images: Vec<u32> = g.images().to_vec();
            for (&k, &off) in depths.iter().zip(&offsets) {
                let block = self.level.block_size(k);
                for x in 0..self.level.size_at(k) {
                    images.push((off + g.image(x * block) / block) as u32);
                }
            }
            Perm::from_images_unchecked(images)
        };
        let gens: Vec<Perm> = group.generators().iter().map(extend).collect();
        let big = PermGroup::with_known_order(total, gens, group.order());
        let points: Vec<usize> = vertices
            .iter()
            .map(|v| match depths.iter().position(|&k| k == v.depth()) {
                Some(j) => offsets[j] + self.level.ancestor_index(self.level.subtree_range(v).start, v.depth()),
                None => self.level.index_of(v),
            })
            .collect();
        let stab = big.pointwise_stabilizer(&points);
        let gens = stab
            .generators()
            .iter()
            .map(|g| Perm::from_images_unchecked(g.images()[..n].to_vec()))
            .collect();
        Ok(PermGroup::with_known_order(n, gens, stab.order()))
    }

    pub fn rigid_stabilizer(&self, u: &Vertex) -> Result<PermGroup, PermGroupError> {
        rigid_stabilizer(&self.group, &self.level, u)
    }

    pub fn level_rigid_stabilizer(&self, x: &Vertex, k: usize) -> Result<PermGroup, PermGroupError> {
        level_rigid_stabilizer(&self.group, &self.level, x, k)
    }
}

/// `R_G(T_u)`: elements of `g` fixing every level point outside the
/// subtree of `u`.
pub fn rigid_stabilizer(g: &PermGroup, level: &Level, u: &Vertex) -> Result<PermGroup, PermGroupError> {
    u.validate(level.valency())?;
    if u.depth() > level.depth() {
        return Err(crate::treecore::TreeError::TooDeep {
            vertex: u.depth(),
            depth: level.depth(),
        }
        .into());
    }
    let inside = level.subtree_range(u);
    let outside: Vec<usize> = (0..level.size()).filter(|x| !inside.contains(x)).collect();
    Ok(g.pointwise_stabilizer(&outside))
}

/// `Rist_k(T_x) = ∏ R_G(T_{xw})` over the depth-`k` descendants `xw`.
pub fn level_rigid_stabilizer(g: &PermGroup, level: &Level, x: &Vertex, k: usize) -> Result<PermGroup, PermGroupError> {
    if x.depth() + k > level.depth() {
        return Err(crate::treecore::TreeError::TooDeep {
            vertex: x.depth() + k,
            depth: level.depth(),
        }
        .into());
    }
    x.validate(level.valency())?;
    let factors = x
        .descendants(level.valency(), k)
        .iter()
        .map(|w| rigid_stabilizer(g, level, w))
        .collect::<Result<Vec<_>, _>>()?;
    let order = factors.iter().fold(num_bigint::BigUint::from(1u32), |acc, f| acc * f.order());
    let gens = factors.iter().flat_map(|f| f.generators().iter().cloned()).collect();
    Ok(PermGroup::with_known_order(level.size(), gens, &order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::builtin;

    #[test]
    fn grigorchuk_small_levels() {
        let g = builtin::grigorchuk();
        let orders: Vec<u64> = (1..=5)
            .map(|n| LevelQuotient::new(&g, n).unwrap().group().order().try_into().unwrap())
            .collect();
        assert_eq!(orders, [2, 8, 128, 1 << 12, 1 << 22]);
        let q = LevelQuotient::new(&builtin::trivial(), 4).unwrap();
        assert!(q.group().is_trivial());
    }

    #[test]
    fn rigid_stabilizers() {
        let g = builtin::grigorchuk();
        let q = LevelQuotient::new(&g, 3).unwrap();
        assert!(q.rigid_stabilizer(&Vertex::root()).unwrap().same_group(q.group()));
        let r0 = q.rigid_stabilizer(&Vertex::new(vec![0])).unwrap();
        assert!(!r0.is_trivial());
        for h in r0.generators() {
            assert!((4..8).all(|x| h.fixes(x)));
        }
        let prod = q.level_rigid_stabilizer(&Vertex::root(), 1).unwrap();
        let r1 = q.rigid_stabilizer(&Vertex::new(vec![1])).unwrap();
        assert_eq!(*prod.order(), r0.order() * r1.order());
    }

    #[test]
    fn sections_on_the_quotient() {
        let g = builtin::grigorchuk();
        let q = LevelQuotient::new(&g, 3).unwrap();
        let b = q.generator_image(1);
        assert!(!q.section_is_nontrivial(b, &Vertex::new(vec![0, 0])));
        assert!(q.section_is_nontrivial(b, &Vertex::new(vec![0])));
        let a = q.generator_image(0);
        assert!(!q.section_is_nontrivial(a, &Vertex::root().child(0)));
        assert_eq!(q.vertex_image(a, &Vertex::new(vec![0, 1])), Vertex::new(vec![1, 1]));
    }
}
