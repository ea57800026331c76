use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{ClosedSetSpec, Coloring, ColoringError};
use crate::perm::Perm;
use crate::permgrp::{LevelQuotient, PermGroup};
use crate::selfsim::RecursionTable;
use crate::treecore::Vertex;

/// A finite surrogate for a subgroup `H`, realized inside a level
/// quotient `Γ_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupSpec {
    /// The image of the subgroup generated by these words.
    WordGenerated(Vec<String>),
    /// The stabilizer in `Γ_m` of each listed vertex.
    MarkedStabilizer(Vec<Vertex>),
}

impl SubgroupSpec {
    /// The stabilizer of the ray prefix `x^m`, a surrogate for the
    /// stabilizer of the constant ray.
    pub fn spine(x: usize, m: usize) -> SubgroupSpec {
        SubgroupSpec::MarkedStabilizer(vec![Vertex::new(vec![x; m])])
    }

    pub fn realize(&self, table: &RecursionTable, q: &LevelQuotient) -> Result<PermGroup, ColoringError> {
        match self {
            SubgroupSpec::WordGenerated(words) => {
                if words.is_empty() {
                    return Err(ColoringError::Precondition("empty generator list".into()));
                }
                let gens = words
                    .iter()
                    .map(|w| Ok(q.word_image(&table.parse_word(w)?)))
                    .collect::<Result<Vec<Perm>, ColoringError>>()?;
                Ok(PermGroup::new(q.level().size(), gens)?)
            }
            SubgroupSpec::MarkedStabilizer(vertices) => {
                if vertices.is_empty() {
                    return Err(ColoringError::Precondition("no marked vertices".into()));
                }
                Ok(q.vertex_stabilizer(q.group(), vertices)?)
            }
        }
    }
}

/// Vertices fixed by a subgroup of `Γ_m` on each level `0..=m`, and the
/// union of the cylinders over the fixed level-`m` vertices, an outer
/// approximation of `Fix(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixReport {
    pub levels: Vec<Vec<Vertex>>,
    pub approximation: ClosedSetSpec,
}

pub fn fix_levels(q: &LevelQuotient, h: &PermGroup) -> FixReport {
    let level = q.level();
    let m = level.depth();
    let levels: Vec<Vec<Vertex>> = (0..=m)
        .map(|i| {
            let block = level.block_size(i);
            (0..level.size_at(i))
                .filter(|&x| h.generators().iter().all(|g| g.image(x * block) / block == x))
                .map(|x| level.vertex_at(x * block).prefix(i))
                .collect()
        })
        .collect();
    let approximation = ClosedSetSpec::new(levels[m].clone(), Vec::new());
    FixReport { levels, approximation }
}

/// The coloring of `Fix(H)` at quotient depth: green below vertices all of
/// whose leaves are fixed, red below vertices with no fixed leaf.
pub fn fixed_point_coloring(q: &LevelQuotient, h: &PermGroup, horizon: usize) -> Result<Coloring, ColoringError> {
    let fix = fix_levels(q, h);
    Coloring::new(&fix.approximation, q.level().valency(), horizon.min(q.depth()))
}

/// `A(B)`: elements of `group` fixing every vertex of `B` and acting
/// trivially below it.
pub fn subgroup_a(q: &LevelQuotient, group: &PermGroup, b: &[Vertex]) -> PermGroup {
    group.pointwise_stabilizer(&q.leaves_below(b))
}

/// `K_i(H)` inside `Γ_m`.
#[derive(Clone, Debug)]
pub struct ApproxSubgroup {
    pub group: PermGroup,
    /// `H ∩ A(B_i)`.
    pub h_part: PermGroup,
    /// `∏_{v ∈ G_i ∪ B_i} Rist_{c0}(T_v)`.
    pub rist_part: PermGroup,
    pub i: usize,
    pub c0: usize,
    pub m: usize,
    pub blue: Vec<Vertex>,
    pub green: Vec<Vertex>,
    /// Whether `H ∩ A(B_i)` normalizes the rigid part, so that the group
    /// generated is the setwise product.
    pub product_form: bool,
    /// `[Γ_m : K_i(H)]`.
    pub index: BigUint,
}

/// Builds `K_i(H) = (H ∩ A(B_i)) · ∏_{v ∈ G_i ∪ B_i} Rist_{c0}(T_v)` in
/// `Γ_m` from the coloring of level `i`.
pub fn k_i_subgroup(q: &LevelQuotient, h: &PermGroup, coloring: &Coloring, i: usize, c0: usize) -> Result<ApproxSubgroup, ColoringError> {
    let m = q.depth();
    if i + c0 > m {
        return Err(ColoringError::DepthBudget { i, c0, m });
    }
    if i > coloring.horizon() {
        return Err(ColoringError::Precondition(format!(
            "coloring horizon {} is below level {i}",
            coloring.horizon()
        )));
    }
    if !h.is_subgroup_of(q.group()) {
        return Err(crate::permgrp::PermGroupError::NotContained.into());
    }
    let blue = coloring.blue(i);
    let green = coloring.green(i);
    let h_part = subgroup_a(q, h, &blue);
    let mut order = BigUint::from(1u32);
    let mut gens = Vec::new();
    for v in green.iter().chain(&blue) {
        let r = q.level_rigid_stabilizer(v, c0)?;
        order *= r.order();
        gens.extend(r.generators().iter().cloned());
    }
    let rist_part = PermGroup::with_known_order(q.level().size(), gens, &order);
    let product_form = h_part.normalizes(&rist_part);
    let group = h_part.join(rist_part.generators())?;
    let index = q.group().index_of(&group)?;
    Ok(ApproxSubgroup {
        group,
        h_part,
        rist_part,
        i,
        c0,
        m,
        blue,
        green,
        product_form,
        index,
    })
}
