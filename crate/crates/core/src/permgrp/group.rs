use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::Chain;
use super::PermGroupError;
use crate::perm::Perm;

/// A finite permutation group given by generators, with a complete
/// stabilizer chain and its exact order.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: Chain,
    order: BigUint,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.gens.len())
            .field("order", &self.order)
            .finish()
    }
}

impl PermGroup {
    /// `⟨gens⟩` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<PermGroup, PermGroupError> {
        check_degree(degree, &gens)?;
        let mut chain = Chain::new(degree, &[]);
        for g in &gens {
            chain.add_generator(g);
        }
        Ok(Self::from_chain(degree, gens, chain))
    }

    /// `⟨gens⟩` when its order is already known; faster, and exact as long
    /// as `order` is correct.
    pub(crate) fn with_known_order(degree: usize, gens: Vec<Perm>, order: &BigUint) -> PermGroup {
        let chain = Chain::with_known_order(degree, &gens, &[], order);
        Self::from_chain(degree, gens, chain)
    }

    fn from_chain(degree: usize, gens: Vec<Perm>, chain: Chain) -> PermGroup {
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let order = chain.order();
        PermGroup { degree, gens, chain, order }
    }

    pub fn trivial(degree: usize) -> PermGroup {
        Self::from_chain(degree, Vec::new(), Chain::new(degree, &[]))
    }

    /// `Sym(n)` on `{0, …, n−1}`.
    pub fn symmetric(n: usize) -> PermGroup {
        Self::symmetric_on(n, &(0..n).collect::<Vec<_>>())
    }

    /// `Alt(n)` on `{0, …, n−1}`.
    pub fn alternating(n: usize) -> PermGroup {
        Self::alternating_on(n, &(0..n).collect::<Vec<_>>())
    }

    /// The symmetric group of `points`, fixing the rest of `{0, …, degree−1}`.
    pub fn symmetric_on(degree: usize, points: &[usize]) -> PermGroup {
        let k = points.len();
        let mut gens = Vec::new();
        if k >= 2 {
            gens.push(cycle_perm(degree, &points[..2]));
        }
        if k >= 3 {
            gens.push(cycle_perm(degree, points));
        }
        Self::with_known_order(degree, gens, &factorial(k))
    }

    /// The alternating group of `points`, generated by the 3-cycles
    /// `(p_0 p_1 p_j)`.
    pub fn alternating_on(degree: usize, points: &[usize]) -> PermGroup {
        let gens = (2..points.len())
            .map(|j| cycle_perm(degree, &[points[0], points[1], points[j]]))
            .collect();
        let order = if points.len() < 2 {
            BigUint::one()
        } else {
            factorial(points.len()) / 2u32
        };
        Self::with_known_order(degree, gens, &order)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.base()
    }

    /// Lengths of the fundamental orbits; their product is the order.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of every chain level, concatenated.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.chain.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.contains(g))
    }

    /// Equality as sets of permutations.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    /// `[self : sub]`.
    pub fn index_of(&self, sub: &PermGroup) -> Result<BigUint, PermGroupError> {
        if !sub.is_subgroup_of(self) {
            return Err(PermGroupError::NotContained);
        }
        Ok(&self.order / &sub.order)
    }

    /// Orbit of `x`, in breadth-first order.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut q = 0;
        while q < out.len() {
            let y = out[q];
            for g in &self.gens {
                let z = g.image(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
            q += 1;
        }
        out
    }

    /// Points fixed by every element.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree).filter(|&x| self.gens.iter().all(|g| g.fixes(x))).collect()
    }

    /// `{g : s·g = s for all s ∈ points}`, read off a chain whose base
    /// starts with `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let mut prefix: Vec<usize> = Vec::new();
        for &p in points {
            if !prefix.contains(&p) {
                prefix.push(p);
            }
        }
        if prefix.is_empty() || self.is_trivial() {
            return self.clone();
        }
        let chain = Chain::with_known_order(self.degree, &self.strong_generators(), &prefix, &self.order);
        let k = prefix.len();
        let levels = chain.levels[k..].to_vec();
        let gens = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        let sub = Chain {
            degree: self.degree,
            levels,
        };
        Self::from_chain(self.degree, gens, sub)
    }

    /// `h⁻¹ G h`.
    pub fn conjugate(&self, h: &Perm) -> PermGroup {
        PermGroup {
            degree: self.degree,
            gens: self.gens.iter().map(|g| g.conjugate_by(h)).collect(),
            chain: self.chain.conjugate(h),
            order: self.order.clone(),
        }
    }

    /// `⟨self, extra⟩`.
    pub fn join(&self, extra: &[Perm]) -> Result<PermGroup, PermGroupError> {
        check_degree(self.degree, extra)?;
        let mut chain = self.chain.clone();
        let mut gens = self.gens.clone();
        for g in extra {
            if chain.add_generator(g) {
                gens.push(g.clone());
            }
        }
        Ok(Self::from_chain(self.degree, gens, chain))
    }

    /// The subgroup generated by several subgroups.
    pub fn generated_by(degree: usize, groups: &[&PermGroup]) -> Result<PermGroup, PermGroupError> {
        let gens: Vec<Perm> = groups.iter().flat_map(|g| g.gens.iter().cloned()).collect();
        PermGroup::new(degree, gens)
    }

    /// Normal closure of `elements` under conjugation by `self`.
    pub fn normal_closure(&self, elements: &[Perm]) -> Result<PermGroup, PermGroupError> {
        check_degree(self.degree, elements)?;
        let mut chain = Chain::new(self.degree, &[]);
        let mut gens = Vec::new();
        let mut queue: Vec<Perm> = elements.to_vec();
        while let Some(x) = queue.pop() {
            if chain.add_generator(&x) {
                for g in &self.gens {
                    queue.push(x.conjugate_by(g));
                }
                gens.push(x);
            }
        }
        Ok(Self::from_chain(self.degree, gens, chain))
    }

    /// `[G, G]`, the normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            for h in &self.gens[i + 1..] {
                let c = Perm::commutator(g, h);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms).expect("degrees agree")
    }

    /// Whether `sub` is normalized by every generator.
    pub fn normalizes(&self, sub: &PermGroup) -> bool {
        self.gens
            .iter()
            .all(|g| sub.gens.iter().all(|h| sub.contains(&h.conjugate_by(g))))
    }

    /// An exactly uniform element: one uniformly chosen coset
    /// representative per chain level.
    pub fn random_element(&self, rng: &mut impl Rng) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for level in self.chain.levels.iter().rev() {
            let y = level.orbit[rng.gen_range(0..level.orbit.len())];
            acc = acc.then(&level.rep(self.degree, y));
        }
        acc
    }

    /// Uniform sample determined by `seed`.
    pub fn uniform_sample(&self, seed: u64) -> Perm {
        self.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// All elements, if there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Perm>, PermGroupError> {
        let n = self.order.to_usize().filter(|&n| n <= limit).ok_or_else(|| PermGroupError::TooLarge {
            order: self.order.clone(),
            limit,
        })?;
        let reps: Vec<Vec<Perm>> = self
            .chain
            .levels
            .iter()
            .map(|l| l.orbit.iter().map(|&y| l.rep(self.degree, y)).collect())
            .collect();
        let mut out = vec![Perm::identity(self.degree)];
        out.reserve(n);
        for level in reps.iter().rev() {
            out = out
                .iter()
                .flat_map(|g| level.iter().map(move |u| g.then(u)))
                .collect();
        }
        Ok(out)
    }
}

fn check_degree(degree: usize, gens: &[Perm]) -> Result<(), PermGroupError> {
    match gens.iter().find(|g| g.degree() != degree) {
        Some(g) => Err(PermGroupError::Degree {
            expected: degree,
            found: g.degree(),
        }),
        None => Ok(()),
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// The cycle `(c_0 c_1 …)` on `degree` points.
pub(crate) fn cycle_perm(degree: usize, cycle: &[usize]) -> Perm {
    Perm::from_cycles(degree, &[cycle]).expect("cycle points are distinct and in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        assert_eq!(*PermGroup::alternating(5).order(), BigUint::from(60u32));
        let s4 = PermGroup::symmetric(4);
        let a4 = PermGroup::alternating(4);
        assert_eq!(s4.index_of(&a4).unwrap(), BigUint::from(2u32));
        assert!(s4.derived_subgroup().same_group(&a4));
        let a5 = PermGroup::alternating(5);
        assert!(a5.derived_subgroup().same_group(&a5));
        assert_eq!(*a5.pointwise_stabilizer(&[1, 2]).order(), BigUint::from(3u32));
        assert!(a4.index_of(&s4).is_err());
    }

    #[test]
    fn deterministic_and_known_order_chains_agree() {
        let s6 = PermGroup::symmetric(6);
        let slow = PermGroup::new(6, s6.generators().to_vec()).unwrap();
        assert_eq!(slow.order(), s6.order());
        let stab = slow.pointwise_stabilizer(&[5, 0]);
        assert_eq!(*stab.order(), BigUint::from(24u32));
        assert!(stab.generators().iter().all(|g| g.fixes(5) && g.fixes(0)));
    }

    #[test]
    fn sampling_and_enumeration() {
        let g = PermGroup::symmetric(4);
        assert_eq!(g.uniform_sample(7), g.uniform_sample(7));
        let all = g.elements(100).unwrap();
        let mut uniq = all.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 24);
        assert!(all.iter().all(|p| g.contains(p)));
        assert!(g.elements(10).is_err());
        assert!(PermGroup::trivial(3).uniform_sample(1).is_identity());
    }
}
