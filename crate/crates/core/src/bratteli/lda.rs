use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use super::clopen::ClopenSet;
use super::paths::{FinitePath, LevelPaths};
use super::BratteliError;
use crate::perm::Perm;
use crate::permgrp::PermGroup;

/// An element of `∏_{v ∈ V_n} Sym(E(v0, v))`, or of the alternating product
/// `Γ_n` when `parity_restricted`. `perms[v]` acts on positions inside
/// `E(v0, v)` as enumerated by [`LevelPaths`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelGroupElement {
    level: usize,
    parity_restricted: bool,
    perms: Vec<Perm>,
}

impl LevelGroupElement {
    pub fn identity(paths: &LevelPaths, parity_restricted: bool) -> LevelGroupElement {
        LevelGroupElement {
            level: paths.level(),
            parity_restricted,
            perms: (0..paths.num_vertices()).map(|v| Perm::identity(paths.degree(v))).collect(),
        }
    }

    pub fn from_vertex_perms(paths: &LevelPaths, perms: Vec<Perm>, parity_restricted: bool) -> Result<LevelGroupElement, BratteliError> {
        if perms.len() != paths.num_vertices() {
            return Err(BratteliError::Precondition(format!(
                "{} vertex permutations for {} vertices",
                perms.len(),
                paths.num_vertices()
            )));
        }
        for (v, p) in perms.iter().enumerate() {
            if p.degree() != paths.degree(v) {
                return Err(BratteliError::Precondition(format!(
                    "vertex {v} has {} paths, permutation has degree {}",
                    paths.degree(v),
                    p.degree()
                )));
            }
            if parity_restricted && !p.is_even() {
                return Err(BratteliError::Parity(format!("odd permutation at vertex {v}")));
            }
        }
        Ok(LevelGroupElement {
            level: paths.level(),
            parity_restricted,
            perms,
        })
    }

    /// Reads off an element from a permutation of all level-`n` paths, which
    /// must preserve end vertices.
    pub fn from_perm(paths: &LevelPaths, g: &Perm, parity_restricted: bool) -> Result<LevelGroupElement, BratteliError> {
        if g.degree() != paths.len() {
            return Err(BratteliError::Precondition(format!("permutation of degree {} on {} paths", g.degree(), paths.len())));
        }
        let mut perms = Vec::with_capacity(paths.num_vertices());
        for v in 0..paths.num_vertices() {
            let mut images = Vec::with_capacity(paths.degree(v));
            for &i in paths.ending_at(v) {
                let j = g.image(i);
                if paths.path(j).end() != v {
                    return Err(BratteliError::Precondition(format!("path {i} is sent to a path with another end vertex")));
                }
                images.push(paths.local_index(j));
            }
            perms.push(Perm::from_images(images).expect("restriction of a permutation"));
        }
        Self::from_vertex_perms(paths, perms, parity_restricted)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn parity_restricted(&self) -> bool {
        self.parity_restricted
    }

    pub fn vertex_perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn is_identity(&self) -> bool {
        self.perms.iter().all(Perm::is_identity)
    }

    pub fn is_even(&self) -> bool {
        self.perms.iter().all(Perm::is_even)
    }

    /// Number of level-`n` paths moved.
    pub fn support_size(&self) -> usize {
        self.perms.iter().map(|p| p.support().len()).sum()
    }

    /// The permutation of all level-`n` paths, by global index.
    pub fn to_perm(&self, paths: &LevelPaths) -> Perm {
        let mut images = vec![0; paths.len()];
        for (v, p) in self.perms.iter().enumerate() {
            let block = paths.ending_at(v);
            for (j, &i) in block.iter().enumerate() {
                images[i] = block[p.image(j)];
            }
        }
        Perm::from_images(images).expect("blockwise permutation")
    }
}

/// `a` followed by `b`.
pub fn lda_compose(a: &LevelGroupElement, b: &LevelGroupElement) -> Result<LevelGroupElement, BratteliError> {
    if a.level != b.level || a.perms.len() != b.perms.len() {
        return Err(BratteliError::Precondition(format!("elements of levels {} and {}", a.level, b.level)));
    }
    let perms = a
        .perms
        .iter()
        .zip(&b.perms)
        .map(|(p, q)| p.try_then(q))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| BratteliError::Precondition(e.to_string()))?;
    Ok(LevelGroupElement {
        level: a.level,
        parity_restricted: a.parity_restricted && b.parity_restricted,
        perms,
    })
}

/// `x·g`: the level-`n` prefix of `x` is replaced, the tail kept.
pub fn lda_act(paths: &LevelPaths, g: &LevelGroupElement, x: &FinitePath) -> Result<FinitePath, BratteliError> {
    if g.level != paths.level() {
        return Err(BratteliError::Precondition(format!("element of level {} on level {} paths", g.level, paths.level())));
    }
    let i = paths.index_of(x)?;
    let v = paths.path(i).end();
    let target = paths.ending_at(v)[g.perms[v].image(paths.local_index(i))];
    let mut edges = paths.path(target).edges().to_vec();
    edges.extend_from_slice(&x.edges()[paths.level()..]);
    Ok(FinitePath::from_parts(edges, x.end()))
}

/// A uniformly random element of `∏ Sym(E(v0, v))`, or of `Γ_n` when
/// `parity_restricted`.
pub fn lda_uniform(paths: &LevelPaths, parity_restricted: bool, rng: &mut impl Rng) -> LevelGroupElement {
    let perms = (0..paths.num_vertices())
        .map(|v| {
            let d = paths.degree(v);
            let mut images: Vec<usize> = (0..d).collect();
            images.shuffle(rng);
            let mut p = Perm::from_images(images).expect("shuffle");
            if parity_restricted && !p.is_even() {
                // odd ↦ odd·(0 1) is a bijection onto the even permutations
                p = p.then(&Perm::from_cycles(d, &[&[0, 1]]).expect("degree at least 2"));
            }
            p
        })
        .collect();
    LevelGroupElement {
        level: paths.level(),
        parity_restricted,
        perms,
    }
}

/// A multisection of degree `d` at level `n`: pairwise disjoint components
/// `F_{i,i}`, each a list of level-`n` paths, with bijections
/// `F_{i,j}: component i → component j` given as position maps. The pair
/// `(x, F_{i,j}(x))` must share its end vertex, so that the bijection
/// extends to cylinders by keeping tails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multisection {
    components: Vec<Vec<FinitePath>>,
    maps: Vec<Vec<Vec<usize>>>,
}

impl Multisection {
    pub fn new(paths: &LevelPaths, components: Vec<Vec<FinitePath>>, maps: Vec<Vec<Vec<usize>>>) -> Result<Multisection, BratteliError> {
        let d = components.len();
        let size = components.first().map_or(0, Vec::len);
        let mut seen = HashSet::new();
        for (i, comp) in components.iter().enumerate() {
            if comp.len() != size {
                return Err(BratteliError::Precondition(format!("component {i} has {} paths, expected {size}", comp.len())));
            }
            for p in comp {
                if p.len() != paths.level() {
                    return Err(BratteliError::Precondition(format!("component {i} holds a path of length {}", p.len())));
                }
                if !seen.insert(paths.index_of(p)?) {
                    return Err(BratteliError::Precondition(format!("components overlap at {:?}", p.edges())));
                }
            }
        }
        if maps.len() != d || maps.iter().any(|row| row.len() != d) {
            return Err(BratteliError::Precondition(format!("expected a {d} × {d} array of bijections")));
        }
        for i in 0..d {
            for j in 0..d {
                let m = &maps[i][j];
                if Perm::from_images(m.clone()).is_err() || m.len() != size {
                    return Err(BratteliError::Precondition(format!("F_{{{i},{j}}} is not a bijection of {size} positions")));
                }
                for (p, &q) in m.iter().enumerate() {
                    if components[i][p].end() != components[j][q].end() {
                        return Err(BratteliError::Precondition(format!(
                            "F_{{{i},{j}}} pairs paths with different end vertices"
                        )));
                    }
                }
            }
        }
        for i in 0..d {
            if maps[i][i].iter().enumerate().any(|(p, &q)| p != q) {
                return Err(BratteliError::Cocycle(format!("F_{{{i},{i}}} is not the identity")));
            }
            for j in 0..d {
                for k in 0..d {
                    if (0..size).any(|p| maps[j][k][maps[i][j][p]] != maps[i][k][p]) {
                        return Err(BratteliError::Cocycle(format!("F_{{{i},{j}}} F_{{{j},{k}}} ≠ F_{{{i},{k}}}")));
                    }
                }
            }
        }
        Ok(Multisection { components, maps })
    }

    /// The multisection whose bijections match paths by position.
    pub fn aligned(paths: &LevelPaths, components: Vec<Vec<FinitePath>>) -> Result<Multisection, BratteliError> {
        let d = components.len();
        let size = components.first().map_or(0, Vec::len);
        let maps = vec![vec![(0..size).collect(); d]; d];
        Self::new(paths, components, maps)
    }

    pub fn degree(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<FinitePath>] {
        &self.components
    }
}

/// `F_π`: component `i` is carried onto component `π(i)` by `F_{i,π(i)}`,
/// and every other path is fixed.
pub fn element_from_multisection(
    paths: &LevelPaths,
    f: &Multisection,
    pi: &Perm,
    parity_restricted: bool,
) -> Result<LevelGroupElement, BratteliError> {
    let d = f.degree();
    if pi.degree() != d {
        return Err(BratteliError::Precondition(format!("π has degree {} for a multisection of degree {d}", pi.degree())));
    }
    if parity_restricted && !pi.is_even() {
        return Err(BratteliError::Parity(format!("{pi} is odd")));
    }
    let mut images: Vec<usize> = (0..paths.len()).collect();
    for i in 0..d {
        let j = pi.image(i);
        for (p, x) in f.components[i].iter().enumerate() {
            let y = &f.components[j][f.maps[i][j][p]];
            images[paths.index_of(x)?] = paths.index_of(y)?;
        }
    }
    let g = Perm::from_images(images).expect("components are disjoint");
    LevelGroupElement::from_perm(paths, &g, parity_restricted)
}

/// `Γ_n = ∏_v Alt(E(v0, v))` (or the symmetric product) as a permutation
/// group on all level-`n` paths.
pub fn gamma_group(paths: &LevelPaths, parity_restricted: bool) -> PermGroup {
    let n = paths.len();
    let mut gens = Vec::new();
    let mut order = BigUint::one();
    for v in 0..paths.num_vertices() {
        let block = paths.ending_at(v);
        let factor = if parity_restricted {
            PermGroup::alternating_on(n, block)
        } else {
            PermGroup::symmetric_on(n, block)
        };
        order *= factor.order();
        gens.extend(factor.generators().iter().cloned());
    }
    PermGroup::with_known_order(n, gens, &order)
}

/// Orders compared by [`rigid_stabilizer_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidStabilizerCheck {
    /// Order of the pointwise stabilizer in `Γ_n` of the paths outside `U`.
    pub stabilizer_order: BigUint,
    /// Order of `∏_v Alt(E(v0, v) ∩ U)`.
    pub product_order: BigUint,
    pub equal: bool,
}

/// Compares the rigid stabilizer of `U` in `Γ_n` with the product of the
/// alternating groups of the `U`-paths at each vertex.
pub fn rigid_stabilizer_check(paths: &LevelPaths, u: &ClopenSet) -> Result<RigidStabilizerCheck, BratteliError> {
    if paths.level() < u.depth() {
        return Err(BratteliError::Precondition(format!("level {} is below n_0(U) = {}", paths.level(), u.depth())));
    }
    let gamma = gamma_group(paths, true);
    let mut outside = Vec::new();
    let mut inside_by_vertex = vec![Vec::new(); paths.num_vertices()];
    for (i, p) in paths.paths().iter().enumerate() {
        if u.contains(p)? {
            inside_by_vertex[p.end()].push(i);
        } else {
            outside.push(i);
        }
    }
    let stab = gamma.pointwise_stabilizer(&outside);
    let gens: Vec<Perm> = inside_by_vertex
        .iter()
        .flat_map(|block| PermGroup::alternating_on(paths.len(), block).generators().to_vec())
        .collect();
    let product = PermGroup::new(paths.len(), gens)?;
    let equal = stab.order() == product.order() && stab.same_group(&product);
    Ok(RigidStabilizerCheck {
        stabilizer_order: stab.order().clone(),
        product_order: product.order().clone(),
        equal,
    })
}
