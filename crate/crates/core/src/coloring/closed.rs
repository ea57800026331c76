use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Color;
use crate::treecore::{BoundaryRay, Portrait, TreeError, ValencySequence, Vertex};

/// A closed subset of the boundary: a finite union of cylinders `C_v`
/// together with finitely many eventually periodic rays.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedSetSpec {
    #[serde(default)]
    pub cylinders: Vec<Vertex>,
    #[serde(default)]
    pub rays: Vec<BoundaryRay>,
}

impl ClosedSetSpec {
    pub fn new(cylinders: Vec<Vertex>, rays: Vec<BoundaryRay>) -> Self {
        ClosedSetSpec { cylinders, rays }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole boundary.
    pub fn full() -> Self {
        ClosedSetSpec {
            cylinders: vec![Vertex::root()],
            rays: Vec::new(),
        }
    }

    pub fn ray(r: BoundaryRay) -> Self {
        ClosedSetSpec {
            cylinders: Vec::new(),
            rays: vec![r],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty() && self.rays.is_empty()
    }

    /// True for normalized specs covering the whole boundary.
    pub fn is_full(&self) -> bool {
        self.cylinders.iter().any(Vertex::is_root)
    }

    /// Canonical form: digits validated, nested cylinders dropped, complete
    /// sibling families merged into their parent, rays inside cylinders
    /// dropped, everything sorted.
    pub fn normalized(&self, valency: &ValencySequence) -> Result<ClosedSetSpec, TreeError> {
        for v in &self.cylinders {
            v.validate(valency)?;
        }
        for r in &self.rays {
            r.validate(valency)?;
        }
        let mut cyl = self.cylinders.clone();
        loop {
            cyl.sort();
            cyl.dedup();
            let snapshot = cyl.clone();
            cyl.retain(|v| !snapshot.iter().any(|u| u != v && u.is_prefix_of(v)));
            let mut families: BTreeMap<Vertex, usize> = BTreeMap::new();
            for v in &cyl {
                if let Some(p) = v.parent() {
                    *families.entry(p).or_default() += 1;
                }
            }
            let complete: Vec<Vertex> = families
                .into_iter()
                .filter(|(p, n)| *n == valency.degree(p.depth() + 1))
                .map(|(p, _)| p)
                .collect();
            if complete.is_empty() {
                break;
            }
            cyl.retain(|v| !complete.iter().any(|p| p.is_prefix_of(v)));
            cyl.extend(complete);
        }
        let mut rays: Vec<BoundaryRay> = self
            .rays
            .iter()
            .filter(|r| !cyl.iter().any(|v| r.passes_through(v)))
            .cloned()
            .collect();
        rays.sort();
        rays.dedup();
        Ok(ClosedSetSpec { cylinders: cyl, rays })
    }

    /// Membership of a boundary ray (for a normalized set description).
    pub fn contains_ray(&self, r: &BoundaryRay) -> bool {
        self.cylinders.iter().any(|v| r.passes_through(v)) || self.rays.contains(r)
    }

    /// Color of `C_v` against the set: green inside, red disjoint, blue
    /// otherwise. Exact for normalized specs.
    pub fn color_of(&self, v: &Vertex) -> Color {
        if self.cylinders.iter().any(|u| u.is_prefix_of(v)) {
            Color::Green
        } else if self.cylinders.iter().any(|u| v.is_prefix_of(u)) || self.rays.iter().any(|r| r.passes_through(v)) {
            Color::Blue
        } else {
            Color::Red
        }
    }

    /// Image `K·g` under the finitary automorphism given by `g` (trivial
    /// sections below its depth).
    pub fn translate_finitary(&self, g: &Portrait) -> Result<ClosedSetSpec, TreeError> {
        let n = g.depth();
        let move_vertex = |v: &Vertex| -> Result<Vertex, TreeError> {
            if v.depth() <= n {
                g.act(v)
            } else {
                Ok(g.act(&v.prefix(n))?.concat(&v.digits()[n..]))
            }
        };
        let cylinders = self.cylinders.iter().map(move_vertex).collect::<Result<Vec<_>, _>>()?;
        let rays = self
            .rays
            .iter()
            .map(|r| {
                let head = g.act(&r.prefix(n))?;
                let tail = r.shift(n);
                let mut pre = head.digits().to_vec();
                pre.extend_from_slice(tail.preperiod());
                BoundaryRay::new(pre, tail.period().to_vec())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ClosedSetSpec { cylinders, rays })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_merges_and_prunes() {
        let bin = ValencySequence::binary();
        let k = ClosedSetSpec::new(
            vec!["00".parse().unwrap(), "01".parse().unwrap(), "010".parse().unwrap()],
            vec![BoundaryRay::constant(0), BoundaryRay::constant(1)],
        )
        .normalized(&bin)
        .unwrap();
        assert_eq!(k.cylinders, vec![Vertex::new(vec![0])]);
        assert_eq!(k.rays, vec![BoundaryRay::constant(1)]);
        let full = ClosedSetSpec::new(vec!["0".parse().unwrap(), "1".parse().unwrap()], vec![])
            .normalized(&bin)
            .unwrap();
        assert!(full.is_full());
        assert_eq!(k.color_of(&"1".parse().unwrap()), Color::Blue);
        assert_eq!(k.color_of(&"10".parse().unwrap()), Color::Red);
        assert_eq!(k.color_of(&"011".parse().unwrap()), Color::Green);
        assert_eq!(k.color_of(&Vertex::root()), Color::Blue);
        assert!(ClosedSetSpec::new(vec!["2".parse().unwrap()], vec![]).normalized(&bin).is_err());
    }

    #[test]
    fn json_shape() {
        let k: ClosedSetSpec = serde_json::from_str(r#"{"cylinders": ["0","10"], "rays": [{"pre": "1", "period": "1"}]}"#).unwrap();
        assert_eq!(k.cylinders.len(), 2);
        assert_eq!(k.rays[0], BoundaryRay::constant(1));
        let k: ClosedSetSpec = serde_json::from_str(r#"{"rays":[{"pre":"","period":"1"}]}"#).unwrap();
        assert!(k.cylinders.is_empty());
    }
}
